#pragma once

#include <string>
#include <vector>

#include "anmf/harness.hpp"
#include "anmf/scenario.hpp"

namespace anmf {

// Fully resolved run description: the scenario plus everything the command
// verbs need.  Built by parse_config from a flat JSON document; every key is
// validated and unknown keys are rejected by name.
struct RunConfig {
  Scenario scenario;
  std::vector<MethodSpec> methods{MethodSpec{}};
  double kappa = 0.05;
  double grid_step = 0.01;
  double refine_xtol = 1e-5;
  int calibration_trials = 100000;
  double rho_start = 0.1;  // theory-curve sweep
  double rho_stop = 1.0;
  double rho_step = 0.05;
  std::string out_path;  // empty -> stdout
  std::string echo;      // resolved configuration, compact JSON

  RunOptions run_options(const MethodSpec& ms) const;
};

// "rscm", "rte", "rscm:optimal", "rte:0.5" -> method + shrinkage mode.
MethodSpec parse_method_spec(const std::string& text);
std::string method_spec_label(const MethodSpec& ms);

RunConfig parse_config(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

// Runs one verb (theory-curve | optimize-rho | simulate-roc |
// calibrate-threshold), writing the artifact to cfg.out_path or stdout.
// Returns the process exit status: 0 success, 2 configuration error,
// 3 numerical failure.  Errors are reported on stderr.
int dispatch(const std::string& verb, const RunConfig& cfg);

}  // namespace anmf
