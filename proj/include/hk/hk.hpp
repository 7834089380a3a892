#pragma once

#include "hk/core.hpp"
#include "hk/diagnostics.hpp"
#include "hk/dynamics.hpp"
#include "hk/experiments.hpp"
#include "hk/graphs.hpp"
#include "hk/io.hpp"
#include "hk/nd_sets.hpp"
#include "hk/parallel.hpp"
#include "hk/random.hpp"
#include "hk/social_graph.hpp"
#include "hk/spectral.hpp"
#include "hk/suites.hpp"
