// hkdyn: command-line front end for the bounded-confidence toolkit.
//
//   hkdyn simulate --model social --graph path:3 --init file:three.json --steps 50 --out t.jsonl
//   hkdyn sweep --n-list 200 --p-grid 0.02:1:0.02 --trials 20 --seed 1 --out rows.csv --aggregate agg.csv
//   hkdyn check --suite nd-lemmas --n 10 --eps auto --trials 100 --seed 7
//   hkdyn demo nondet --eps 0.1
//   hkdyn spectral-report --init file:x.json --graph gnp:30,0.2 --steps 100 --report r.csv
//
// Exit status: 0 success, 1 usage or input error, 2 a check suite found violations.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hk/hk.hpp"

namespace {

using hk::io::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "auto" or a non-negative number.
std::optional<double> parse_eps(const std::string& s) {
  if (s.empty() || s == "auto") return std::nullopt;
  const double v = hk::io::parse_number<double>(s, "--eps");
  if (!(v >= 0.0)) throw UsageError("--eps must be non-negative or 'auto'");
  return v;
}

/// "a" or "a:b" (inclusive range).
std::pair<std::size_t, std::size_t> parse_n_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    const auto n = hk::io::parse_number<std::size_t>(s, "--n");
    return {n, n};
  }
  return {hk::io::parse_number<std::size_t>(s.substr(0, colon), "--n"),
          hk::io::parse_number<std::size_t>(s.substr(colon + 1), "--n")};
}

/// Comma list "0.1,0.2" or inclusive stepped range "lo:hi:step".
std::vector<double> parse_grid(const std::string& s, const std::string& flag) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError(flag + " range must look like lo:hi:step");
    const double lo = hk::io::parse_number<double>(parts[0], flag);
    const double hi = hk::io::parse_number<double>(parts[1], flag);
    const double step = hk::io::parse_number<double>(parts[2], flag);
    if (!(step > 0.0) || hi < lo) throw UsageError(flag + " needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k)
      out.push_back(std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9);  // 0.06, not 0.060000000000000005
    return out;
  }
  for (const auto& p : hk::io::split_commas(s)) out.push_back(hk::io::parse_number<double>(p, flag));
  if (out.empty()) throw UsageError(flag + " is empty");
  return out;
}

/// Sidecar <out>.meta.json recording how an output file was produced.
void write_meta(const std::string& out, const std::string& command, const std::vector<std::string>& argv,
                json resolved) {
  resolved["command"] = command;
  resolved["argv"] = argv;
  auto f = hk::io::open_output(out + ".meta.json");
  f << resolved.dump(2) << '\n';
}

std::string positions_text(const hk::Configuration& x) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ", ";
    if (x.dimension() == 1) {
      out << hk::io::format_double(x.x(i));
    } else {
      out << '[';
      const auto p = x.position(i);
      for (std::size_t k = 0; k < p.size(); ++k) out << (k ? " " : "") << hk::io::format_double(p[k]);
      out << ']';
    }
  }
  out << ')';
  return out.str();
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string model = "classical";
  std::string graph, schedule, noise, eps, init, out, report;
  std::size_t steps = 1000;
  std::optional<double> threshold, rho;
  bool spectral = false, force = false, allow_unfriendly = false;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a, const std::vector<std::string>& argv) {
  const hk::Model model = hk::parse_model(a.model);
  const hk::Configuration x0 = hk::io::parse_init_spec(a.init);
  const std::optional<double> eps_flag = parse_eps(a.eps);
  const double eps = eps_flag.value_or(hk::auto_eps(x0.size()));

  hk::RunSetup setup;
  setup.model = model;
  setup.allow_unfriendly = a.allow_unfriendly;
  setup.stop.max_steps = a.steps;
  setup.stop.movement_threshold = a.threshold;
  setup.stop.cluster_rho = a.rho;

  if (!a.graph.empty() && !a.schedule.empty()) throw UsageError("--graph and --schedule are mutually exclusive");
  if (model == hk::Model::social) {
    if (a.graph.empty() && a.schedule.empty()) throw UsageError("--model social needs --graph or --schedule");
    setup.schedule = a.schedule.empty() ? hk::GraphSchedule::fixed(hk::io::parse_graph_spec(a.graph, a.seed))
                                        : hk::io::read_schedule(a.schedule);
  } else if (!a.graph.empty() || !a.schedule.empty()) {
    throw UsageError("--graph/--schedule only apply to --model social");
  }

  const bool nd = model == hk::Model::nd || model == hk::Model::nd_pairwise;
  if (!nd && !a.noise.empty()) throw UsageError("--noise only applies to --model nd or nd-pairwise");
  if (nd) {
    const hk::NoiseMode mode = model == hk::Model::nd ? hk::NoiseMode::per_agent : hk::NoiseMode::per_pair;
    const std::string spec = a.noise.empty() ? "zero" : a.noise;
    if (spec == "zero") {
      setup.noise = hk::NoiseSource::zero(mode);
    } else if (spec.rfind("uniform:", 0) == 0) {
      setup.noise = hk::NoiseSource::uniform(eps, hk::io::parse_number<std::uint64_t>(spec.substr(8), "--noise"), mode);
    } else if (spec.rfind("file:", 0) == 0) {
      setup.noise = hk::io::read_noise(spec.substr(5));
      if (eps_flag && *eps_flag != setup.noise->bound())
        throw UsageError("--eps disagrees with the eps stored in the noise file");
    } else {
      throw UsageError("--noise must be zero, uniform:<seed> or file:<path>");
    }
  }

  hk::Trajectory traj = hk::run(x0, setup);
  hk::ReportOptions ropt;
  ropt.spectral = a.spectral;
  ropt.override_limit = a.force;
  if (!a.report.empty() || a.spectral) hk::attach_reports(traj, ropt);

  std::cout << "model " << hk::to_string(model) << ", n=" << x0.size() << ", d=" << x0.dimension() << '\n';
  std::cout << "stopped: " << hk::to_string(traj.stop_reason) << " at t=" << traj.stop_time << " after "
            << traj.steps() << " steps\n";
  if (auto t = hk::detect_convergence(traj)) std::cout << "movement below 1e-6 first at t=" << *t << '\n';
  for (const auto& v : traj.friendliness_violations)
    std::cout << "unfriendly transition at t=" << v.t << " (" << v.pairs.size() << " pairs)\n";
  if (x0.size() <= 20) std::cout << "final positions " << positions_text(traj.states.back()) << '\n';

  json meta = {{"model", hk::to_string(model)},
               {"n", x0.size()},
               {"steps", a.steps},
               {"seed", a.seed},
               {"stop_reason", hk::to_string(traj.stop_reason)},
               {"stop_time", traj.stop_time}};
  if (a.threshold) meta["threshold"] = *a.threshold;
  if (a.rho) meta["rho"] = *a.rho;
  if (nd) meta["eps"] = setup.noise->bound();
  if (!a.out.empty()) {
    auto f = hk::io::open_output(a.out);
    hk::io::write_trajectory_jsonl(f, traj);
    write_meta(a.out, "simulate", argv, meta);
  }
  if (!a.report.empty()) {
    auto f = hk::io::open_output(a.report);
    hk::io::write_report_csv(f, traj);
    write_meta(a.report, "simulate", argv, meta);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string spec, n_list, p_grid, graph_model = "gnp", out, aggregate, init;
  std::optional<std::size_t> trials, steps, threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  bool force = false;
};

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& argv) {
  hk::SweepSpec s;
  if (!a.spec.empty()) {
    s = hk::io::sweep_spec_from_json(hk::io::read_json_file(a.spec));
  } else {
    if (a.n_list.empty() || a.p_grid.empty()) throw UsageError("sweep needs --spec, or both --n-list and --p-grid");
    for (double v : parse_grid(a.n_list, "--n-list")) {
      if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("--n-list entries must be positive integers");
      s.n_list.push_back(static_cast<std::size_t>(v));
    }
    s.grid = parse_grid(a.p_grid, "--p-grid");
    s.graph_model = hk::parse_graph_model(a.graph_model);
  }
  if (a.trials) s.trials = *a.trials;
  if (a.seed) s.master_seed = *a.seed;
  if (a.steps) s.max_steps = *a.steps;
  if (a.threshold) s.threshold = *a.threshold;
  if (a.threads) s.threads = *a.threads;
  if (!a.init.empty()) {
    const auto lohi = parse_grid(a.init, "--init-range");
    if (lohi.size() != 2) throw UsageError("--init-range must be lo,hi");
    s.init_range = std::pair{lohi[0], lohi[1]};
  }
  s.force = a.force;
  s.validate();

  const hk::SweepResult result = hk::run_sweep(s);
  const auto stats = hk::aggregate(result);

  json meta = {{"n_list", s.n_list},
               {"grid", s.grid},
               {"graph_model", hk::to_string(s.graph_model)},
               {"trials", s.trials},
               {"master_seed", s.master_seed},
               {"threshold", s.threshold},
               {"max_steps", s.max_steps}};
  if (s.init_range) meta["init"] = {{"lo", s.init_range->first}, {"hi", s.init_range->second}};
  if (!a.out.empty()) {
    auto f = hk::io::open_output(a.out);
    hk::io::write_sweep_csv(f, result);
    write_meta(a.out, "sweep", argv, meta);
  }
  if (!a.aggregate.empty()) {
    auto f = hk::io::open_output(a.aggregate);
    hk::io::write_aggregate_csv(f, stats);
    write_meta(a.aggregate, "sweep", argv, meta);
  }
  if (a.out.empty() && a.aggregate.empty()) hk::io::write_aggregate_csv(std::cout, stats);
  std::size_t capped = 0;
  for (const auto& c : stats) capped += c.num_capped;
  std::cerr << result.rows.size() << " runs, " << capped << " capped at " << s.max_steps << " steps\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string suite, n, eps = "auto", model = "nd", out;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::optional<std::size_t> steps, threads;
  double rho = 1e-6;
};

int cmd_check(const CheckArgs& a, const std::vector<std::string>& argv) {
  const hk::Suite suite = hk::parse_suite(a.suite);
  hk::SuiteOptions o;
  switch (suite) {
    case hk::Suite::nd_lemmas: o.n_min = 3, o.n_max = 15; break;
    case hk::Suite::gap: o.n_min = 2, o.n_max = 50; break;
    case hk::Suite::nontrivial: o.n_min = 2, o.n_max = 20; break;
    case hk::Suite::theorem2: o.n_min = 2, o.n_max = 12; break;
    default: o.n_min = 2, o.n_max = 30; break;
  }
  if (!a.n.empty()) std::tie(o.n_min, o.n_max) = parse_n_range(a.n);
  o.eps = parse_eps(a.eps);
  o.trials = a.trials;
  o.seed = a.seed;
  o.steps = a.steps;
  o.model = hk::parse_model(a.model);
  o.rho = a.rho;
  if (a.threads) o.threads = *a.threads;

  const hk::SuiteResult r = hk::run_suite(suite, o);
  json summary = hk::io::suite_summary_json(r);
  summary["n"] = {o.n_min, o.n_max};
  summary["eps"] = o.eps ? json(*o.eps) : json(suite == hk::Suite::nontrivial ? "0.1" : "1/(8n^2)");
  summary["seed"] = o.seed;
  if (!a.out.empty()) {
    auto f = hk::io::open_output(a.out);
    f << summary.dump(2) << '\n';
    write_meta(a.out, "check", argv, {{"suite", a.suite}, {"trials", o.trials}, {"seed", o.seed}});
  } else {
    std::cout << summary.dump(2) << '\n';
  }
  std::cerr << a.suite << ": " << r.trials << " trials, " << r.evaluations << " evaluations, "
            << r.violations.size() << " violations\n";
  return r.ok() ? 0 : 2;
}

// ---------------------------------------------------------------------------

struct DemoArgs {
  std::string kind, out;
  std::optional<double> eps, delta;
  std::optional<std::size_t> steps;
};

int cmd_demo(const DemoArgs& a, const std::vector<std::string>& argv) {
  const hk::DemoKind kind = hk::parse_demo_kind(a.kind);
  std::optional<hk::Trajectory> traj;
  switch (kind) {
    case hk::DemoKind::nofrz: {
      const hk::Demo d = hk::demo_nofrz();
      std::cout << d.narrative << '\n';
      hk::StopRule stop;
      stop.max_steps = a.steps.value_or(40) + 1;
      traj = hk::run_demo(d, stop);
      std::cout << "t,movement,ratio\n";
      double prev = 0.0;
      for (std::size_t t = 0; t < traj->steps(); ++t) {
        const double m = hk::total_movement(traj->states[t], traj->states[t + 1]);
        std::cout << t << ',' << hk::io::format_double(m) << ',' << (t ? hk::io::format_double(m / prev) : "") << '\n';
        prev = m;
      }
      break;
    }
    case hk::DemoKind::initdep: {
      std::vector<double> deltas = a.delta ? std::vector<double>{*a.delta} : std::vector<double>{1e-1, 1e-2, 1e-3};
      std::cout << hk::demo_initdep(deltas.front()).narrative << '\n' << "delta,first_contact,convergence_time\n";
      for (double delta : deltas) {
        const hk::Demo d = hk::demo_initdep(delta);
        hk::StopRule stop;
        stop.max_steps = a.steps.value_or(10000);
        traj = hk::run_demo(d, stop);
        const auto contact = hk::first_contact(d, 0, 3, stop.max_steps);
        const auto conv = hk::detect_convergence(*traj);
        std::cout << hk::io::format_double(delta) << ',' << (contact ? std::to_string(*contact) : "none") << ','
                  << (conv ? std::to_string(*conv) : "none") << '\n';
      }
      break;
    }
    case hk::DemoKind::noorder: {
      const hk::Demo d = hk::demo_noorder();
      std::cout << d.narrative << '\n';
      std::cout << "edges";
      for (const auto& [i, j] : d.graph->edges()) std::cout << ' ' << i + 1 << '-' << j + 1;
      std::cout << '\n';
      hk::StopRule stop;
      stop.max_steps = a.steps.value_or(1);
      traj = hk::run_demo(d, stop);
      const auto swap = hk::find_order_swap(traj->states[0], traj->states[1]);
      std::cout << "before " << positions_text(traj->states[0]) << '\n'
                << "after  " << positions_text(traj->states[1]) << '\n';
      if (swap) std::cout << "agents " << swap->left + 1 << " and " << swap->right + 1 << " swapped order\n";
      break;
    }
    case hk::DemoKind::nondet: {
      const hk::Demo d = hk::demo_nondet(a.eps.value_or(0.1));
      std::cout << d.narrative << '\n';
      hk::StopRule stop;
      stop.max_steps = a.steps.value_or(1);
      traj = hk::run_demo(d, stop);
      std::cout << "before " << positions_text(traj->states[0]) << '\n'
                << "after  " << positions_text(traj->states[1]) << '\n';
      std::cout << (hk::find_order_swap(traj->states[0], traj->states[1]) ? "order swapped\n" : "order kept\n");
      break;
    }
  }
  if (!a.out.empty() && traj) {
    auto f = hk::io::open_output(a.out);
    hk::io::write_trajectory_jsonl(f, *traj);
    json meta = {{"demo", a.kind}};
    if (a.eps) meta["eps"] = *a.eps;
    if (a.delta) meta["delta"] = *a.delta;
    write_meta(a.out, "demo", argv, meta);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SpectralArgs {
  std::string init, graph, report;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  bool force = false;
};

int cmd_spectral(const SpectralArgs& a, const std::vector<std::string>& argv) {
  const hk::Configuration x0 = hk::io::parse_init_spec(a.init);
  std::optional<hk::SocialGraph> g;
  if (!a.graph.empty()) g = hk::io::parse_graph_spec(a.graph, a.seed);
  const std::size_t limit = hk::ReportOptions{}.spectral_limit;
  if (x0.size() > limit && !a.force)
    throw UsageError("n=" + std::to_string(x0.size()) + " exceeds the dense eigenvalue limit of " +
                     std::to_string(limit) + "; pass --force to run anyway");
  const auto cg = hk::communication_graph(x0, g ? &*g : nullptr);
  const hk::SpectralReport r = hk::spectral_report(x0, cg);
  std::cout << json{{"n", x0.size()},
                    {"energy", r.energy},
                    {"active_energy", r.active_energy},
                    {"lambda", r.lambda},
                    {"gap_bound", r.gap_bound},
                    {"diameter", r.diameter},
                    {"components", r.component_count}}
                   .dump(2)
            << '\n';
  if (a.steps == 0) return 0;

  hk::RunSetup setup;
  if (g) {
    setup.model = hk::Model::social;
    setup.schedule = hk::GraphSchedule::fixed(*g);
  }
  setup.stop.max_steps = a.steps;
  hk::Trajectory traj = hk::run(x0, setup);
  hk::ReportOptions ropt;
  ropt.spectral = true;
  ropt.override_limit = a.force;
  hk::attach_reports(traj, ropt);
  std::size_t failures = 0;
  for (const auto& rep : traj.reports)
    if (rep.decrement < rep.guaranteed_decrement - hk::kDecrementTolerance) ++failures;
  std::cerr << traj.reports.size() << " steps, decrement bound failed on " << failures << '\n';
  if (a.report.empty()) {
    hk::io::write_report_csv(std::cout, traj);
  } else {
    auto f = hk::io::open_output(a.report);
    hk::io::write_report_csv(f, traj);
    write_meta(a.report, "spectral-report", argv, {{"steps", a.steps}, {"seed", a.seed}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Bounded-confidence opinion dynamics: simulation, sweeps and runtime checks"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run one trajectory");
  simulate->add_option("--model", sim.model, "classical | social | nd | nd-pairwise")
      ->check(CLI::IsMember({"classical", "social", "nd", "nd-pairwise"}));
  simulate->add_option("--graph", sim.graph, "gnp:n,p | ba:n,m | complete:n | path:n | empty:n | file:<path>");
  simulate->add_option("--schedule", sim.schedule, "JSON file with a sequence of graphs");
  simulate->add_option("--noise", sim.noise, "zero | uniform:<seed> | file:<path>");
  simulate->add_option("--eps", sim.eps, "noise bound, or 'auto' for 1/(8n^2)");
  simulate->add_option("--init", sim.init, "file:<path> | uniform:<n>,<lo>,<hi>,<seed>")->required();
  simulate->add_option("--steps", sim.steps, "maximum number of steps");
  simulate->add_option("--threshold", sim.threshold, "stop once total movement of a step drops below this");
  simulate->add_option("--rho", sim.rho, "stop once every cluster fits in an interval of this length");
  simulate->add_flag("--spectral", sim.spectral, "compute energy and eigenvalue reports");
  simulate->add_option("--out", sim.out, "trajectory JSONL");
  simulate->add_option("--report", sim.report, "per-step report CSV");
  simulate->add_option("--seed", sim.seed, "seed for random graph specs");
  simulate->add_flag("--force", sim.force, "allow spectral reports above the size limit");
  simulate->add_flag("--allow-unfriendly", sim.allow_unfriendly, "record friendliness violations instead of aborting");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "convergence time over random social networks");
  sweep->add_option("--spec", sw.spec, "sweep spec JSON");
  sweep->add_option("--n-list", sw.n_list, "agent counts, e.g. 100,200");
  sweep->add_option("--p-grid", sw.p_grid, "edge probabilities (or BA m values): list or lo:hi:step");
  sweep->add_option("--graph-model", sw.graph_model, "gnp | ba")->check(CLI::IsMember({"gnp", "ba"}));
  sweep->add_option("--trials", sw.trials, "runs per cell");
  sweep->add_option("--seed", sw.seed, "master seed");
  sweep->add_option("--steps", sw.steps, "cap on steps per run");
  sweep->add_option("--threshold", sw.threshold, "movement threshold defining convergence");
  sweep->add_option("--init-range", sw.init, "lo,hi for initial positions (default 1,n)");
  sweep->add_option("--threads", sw.threads, "worker threads (0: all cores)");
  sweep->add_option("--out", sw.out, "per-run CSV");
  sweep->add_option("--aggregate", sw.aggregate, "per-cell CSV");
  sweep->add_flag("--force", sw.force, "run even above the work budget");

  CheckArgs ck;
  auto* check = app.add_subcommand("check", "randomised runtime checks of the convergence inequalities");
  check->add_option("--suite", ck.suite, "nd-lemmas | energy | decrement | gap | nontrivial | friendly | theorem2")
      ->required();
  check->add_option("--n", ck.n, "agent count, or range lo:hi");
  check->add_option("--eps", ck.eps, "noise bound (nd suites) or step threshold (nontrivial); 'auto' for the default");
  check->add_option("--trials", ck.trials, "number of random instances");
  check->add_option("--seed", ck.seed, "seed");
  check->add_option("--steps", ck.steps, "steps per run");
  check->add_option("--model", ck.model, "nd | nd-pairwise")->check(CLI::IsMember({"nd", "nd-pairwise"}));
  check->add_option("--rho", ck.rho, "cluster width for theorem2");
  check->add_option("--threads", ck.threads, "worker threads (0: all cores)");
  check->add_option("--out", ck.out, "summary JSON (default stdout)");

  DemoArgs dm;
  auto* demo = app.add_subcommand("demo", "constructed instances of qualitative behaviour");
  demo->add_option("kind", dm.kind, "nofrz | initdep | noorder | nondet")
      ->required()
      ->check(CLI::IsMember({"nofrz", "initdep", "noorder", "nondet"}));
  demo->add_option("--eps", dm.eps, "noise for nondet (default 0.1)");
  demo->add_option("--delta", dm.delta, "gap for initdep (default: 0.1, 0.01 and 0.001)");
  demo->add_option("--steps", dm.steps, "steps to show");
  demo->add_option("--out", dm.out, "trajectory JSONL");

  SpectralArgs sp;
  auto* spectral = app.add_subcommand("spectral-report", "energy and second eigenvalue of a configuration");
  spectral->add_option("--init", sp.init, "file:<path> | uniform:<n>,<lo>,<hi>,<seed>")->required();
  spectral->add_option("--graph", sp.graph, "social graph spec (default: classical)");
  spectral->add_option("--steps", sp.steps, "also run this many steps and report each");
  spectral->add_option("--report", sp.report, "per-step report CSV (default stdout)");
  spectral->add_option("--seed", sp.seed, "seed for random graph specs");
  spectral->add_flag("--force", sp.force, "allow n above the dense eigenvalue limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*simulate) return cmd_simulate(sim, args);
    if (*sweep) return cmd_sweep(sw, args);
    if (*check) return cmd_check(ck, args);
    if (*demo) return cmd_demo(dm, args);
    if (*spectral) return cmd_spectral(sp, args);
  } catch (const std::exception& e) {
    std::cerr << "hkdyn: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
