#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hk/io.hpp"

using namespace hk;
using namespace hk::io;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("hk_io_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.0, 0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 1e22}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(20.0), "20");
}

TEST(ConfigurationJson, ShorthandAndFull) {
  const auto a = configuration_from_json(json::parse(R"({"positions": [0, 0.5, 1]})"));
  EXPECT_EQ(a, Configuration::line({0.0, 0.5, 1.0}));
  const auto b = configuration_from_json(
      json::parse(R"({"dimension": 2, "confidence": 2, "positions": [[0, 1], [2, 3]]})"));
  EXPECT_EQ(b, Configuration({{0.0, 1.0}, {2.0, 3.0}}, 2.0));
  EXPECT_EQ(configuration_from_json(configuration_to_json(b)), b);
}

TEST(ConfigurationJson, Errors) {
  EXPECT_THROW(configuration_from_json(json::parse(R"({"confidence": 1})")), FormatError);
  EXPECT_THROW(configuration_from_json(json::parse(R"({"positions": []})")), FormatError);
  EXPECT_THROW(configuration_from_json(json::parse(R"({"positions": ["a"]})")), FormatError);
  EXPECT_THROW(configuration_from_json(json::parse(R"({"dimension": 2, "positions": [[0, 1], [2]]})")),
               FormatError);
  EXPECT_THROW(configuration_from_json(json::parse(R"({"positions": [0], "confidence": -1})")), FormatError);
  EXPECT_THROW(read_configuration("/nonexistent/where.json"), FormatError);
  EXPECT_THROW(read_configuration(temp_file("bad.json", "{not json")), FormatError);
}

TEST(GraphJson, OneBasedEdges) {
  const auto g = graph_from_json(json::parse(R"({"n": 3, "edges": [[1, 2], [3, 2]]})"));
  EXPECT_EQ(g, named_graph(NamedGraph::path, 3));
  EXPECT_EQ(graph_to_json(g).dump(), R"({"edges":[[1,2],[2,3]],"n":3})");
  EXPECT_THROW(graph_from_json(json::parse(R"({"n": 3, "edges": [[0, 1]]})")), FormatError);
  EXPECT_THROW(graph_from_json(json::parse(R"({"n": 3, "edges": [[2, 2]]})")), FormatError);
  EXPECT_THROW(graph_from_json(json::parse(R"({"edges": []})")), FormatError);
}

TEST(GraphSpec, Kinds) {
  EXPECT_EQ(parse_graph_spec("complete:4", 0), named_graph(NamedGraph::complete, 4));
  EXPECT_EQ(parse_graph_spec("path:3", 0), named_graph(NamedGraph::path, 3));
  EXPECT_EQ(parse_graph_spec("empty:2", 0), SocialGraph(2));
  EXPECT_EQ(parse_graph_spec("gnp:20,0.3", 5), gnp(20, 0.3, 5));
  EXPECT_EQ(parse_graph_spec("ba:20,2", 5), barabasi_albert(20, 2, 5));
  const auto path = temp_file("g.json", R"({"n": 2, "edges": [[1, 2]]})");
  EXPECT_EQ(parse_graph_spec("file:" + path, 0), named_graph(NamedGraph::complete, 2));
  EXPECT_THROW(parse_graph_spec("gnp:20", 0), FormatError);
  EXPECT_THROW(parse_graph_spec("gnp:20,x", 0), FormatError);
  EXPECT_THROW(parse_graph_spec("gnp:20,2", 0), FormatError);
  EXPECT_THROW(parse_graph_spec("star:5", 0), FormatError);
  EXPECT_THROW(parse_graph_spec("complete", 0), FormatError);
}

TEST(InitSpec, UniformAndFile) {
  const auto x = parse_init_spec("uniform:50,1,3,9");
  EXPECT_EQ(x.size(), 50u);
  for (double v : x.coords()) {
    EXPECT_GE(v, 1.0);
    EXPECT_LT(v, 3.0);
  }
  EXPECT_EQ(x, parse_init_spec("uniform:50,1,3,9"));
  const auto path = temp_file("x.json", R"({"positions": [0, 0.5]})");
  EXPECT_EQ(parse_init_spec("file:" + path), Configuration::line({0.0, 0.5}));
  EXPECT_THROW(parse_init_spec("uniform:5,3,1,0"), FormatError);
  EXPECT_THROW(parse_init_spec("normal:5,0,1,0"), FormatError);
}

TEST(NoiseJson, Tables) {
  const auto x = Configuration::line({0.0, 1.0});
  const auto a = noise_from_json(json::parse(R"({"eps": 0.1, "mode": "per-agent", "values": {"0,1": 0.1, "3,2": -0.05}})"));
  EXPECT_EQ(a.value(0, 0, std::nullopt, x), 0.1);
  EXPECT_EQ(a.value(3, 1, std::nullopt, x), -0.05);
  EXPECT_EQ(a.value(1, 0, std::nullopt, x), 0.0);
  const auto b = noise_from_json(json::parse(R"({"eps": 0.1, "mode": "per-pair", "values": {"0,1,2": 0.1}})"));
  EXPECT_EQ(b.mode(), NoiseMode::per_pair);
  EXPECT_EQ(b.value(0, 0, 1, x), 0.1);
  EXPECT_THROW(noise_from_json(json::parse(R"({"eps": 0.1, "values": {"0,1": 0.2}})")), FormatError);
  EXPECT_THROW(noise_from_json(json::parse(R"({"eps": 0.1, "values": {"0,0": 0.1}})")), FormatError);
  EXPECT_THROW(noise_from_json(json::parse(R"({"eps": 0.1, "mode": "per-pair", "values": {"0,1": 0.1}})")),
               FormatError);
  EXPECT_THROW(noise_from_json(json::parse(R"({"eps": 0.1, "mode": "sideways"})")), FormatError);
}

TEST(ScheduleJson, Sequence) {
  const auto s = schedule_from_json(
      json::parse(R"({"n": 3, "friendly": true, "graphs": [{"edges": [[1, 2]]}, {"edges": [[1, 2], [2, 3]]}]})"));
  EXPECT_TRUE(s.declared_friendly());
  EXPECT_EQ(s.initial()->edge_count(), 1u);
  EXPECT_THROW(schedule_from_json(json::parse(R"({"n": 3, "graphs": []})")), FormatError);
}

TEST(SweepSpecJson, Fields) {
  const auto s = sweep_spec_from_json(json::parse(
      R"({"n_list": [10, 20], "p_grid": [0.1, 0.2], "trials": 3, "master_seed": 7, "init": {"lo": 0, "hi": 5}})"));
  EXPECT_EQ(s.n_list, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(s.grid, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(s.trials, 3u);
  EXPECT_EQ(s.master_seed, 7u);
  EXPECT_EQ(s.init_range, (std::pair{0.0, 5.0}));
  const auto ba = sweep_spec_from_json(json::parse(R"({"n_list": [10], "m_list": [2], "graph_model": "ba"})"));
  EXPECT_EQ(ba.graph_model, GraphModel::ba);
  EXPECT_THROW(sweep_spec_from_json(json::parse(R"({"n_list": [10]})")), FormatError);
  EXPECT_THROW(sweep_spec_from_json(json::parse(R"({"n_list": [10], "p_grid": [0.1], "trials": 0})")), FormatError);
}

TEST(Csv, Headers) {
  SweepResult r;
  r.rows.push_back({5, 0.25, 0, 11, 12, true});
  std::ostringstream a, b;
  write_sweep_csv(a, r);
  EXPECT_EQ(a.str(), "n,p,trial,seed,convergence_time,converged\n5,0.25,0,11,12,1\n");
  write_aggregate_csv(b, aggregate(r));
  EXPECT_EQ(b.str(), "n,p,mean_time,std_time,num_converged,num_capped\n5,0.25,12,0,1,0\n");
}

TEST(Csv, ReportAndTrajectory) {
  RunSetup s;
  s.stop.max_steps = 3;
  auto traj = run(Configuration::line({0.0, 0.5}), s);
  ReportOptions opt;
  opt.spectral = true;
  attach_reports(traj, opt);
  std::ostringstream rep, lines;
  write_report_csv(rep, traj);
  EXPECT_EQ(rep.str(),
            "t,energy,active_energy,lambda,gap_bound,decrement,guaranteed_decrement,total_movement,diameter,components\n"
            "0,0.5,0.5,0,0.75,0.5,0.5,0.5,1,1\n"
            "1,0,0,0,0.75,0,0,0,1,1\n");
  write_trajectory_jsonl(lines, traj);
  EXPECT_EQ(lines.str(),
            "{\"positions\":[0.0,0.5],\"t\":0}\n{\"positions\":[0.25,0.25],\"t\":1}\n"
            "{\"positions\":[0.25,0.25],\"t\":2}\n");
}
