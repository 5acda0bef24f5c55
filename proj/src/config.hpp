#pragma once

#include <stdexcept>
#include <string>

#include "sim.hpp"

namespace sparkppr {

struct RunConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ExperimentConfig experiment;
  bool has_seed = false;     // config file carried an explicit seed
  bool has_workers = false;  // ditto for the worker cap
};

// Flat "key = value" configuration, one pair per line, '#' comments.
// Key vocabulary matches the CSV columns (q, K, N, scheme, decoder, M, eps,
// ps, L, trials, seed) plus catalog/out/dump/packing/w_max/work_cap/workers.
// Unknown keys are rejected.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace sparkppr
