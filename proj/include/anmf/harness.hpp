#pragma once

#include <vector>

#include "anmf/scenario.hpp"
#include "anmf/theory.hpp"
#include "anmf/types.hpp"

namespace anmf {

enum class Method { Rscm, Rte };
enum class RhoMode { Optimal, Fixed };

const char* method_name(Method m);

struct RunOptions {
  Method method = Method::Rscm;
  RhoMode rho_mode = RhoMode::Optimal;
  double rho_fixed = 0.5;     // shrinkage when rho_mode == Fixed
  double kappa = 0.05;        // lower cut of the data-driven rho search
  double grid_step = 0.01;    // coarse scan resolution of that search
  double refine_xtol = 1e-5;  // golden-section termination width
  double scan_tol = 1e-6;     // robust fixed-point tolerance while scanning
  double final_tol = 1e-9;    // tolerance of the solve used by the statistic
  int max_iter = 200;
  int calibration_trials = 100000;  // H0-only draws for fixed-rho thresholds
};

// One Monte Carlo trial: fresh secondary data, a design fitted to it, and the
// detector statistic evaluated on fresh cell-under-test draws.
struct TrialRecord {
  int trial_index = 0;
  double rho_used = 0.0;
  double sigma_hat = 0.0;  // plug-in H0 scale from this trial's secondary data
  double r_hat = 0.0;      // threshold on sqrt(N)*t at the scenario's first eta
  double t_h0 = 0.0;       // statistic in [0,1] with no target in the cell
  double t_h1 = 0.0;       // statistic in [0,1] with the target present
};

// As TrialRecord, but the target-present statistic is evaluated for several
// amplitudes sharing the same secondary data, design, and clutter draw.
struct AmplitudeSweepRecord {
  int trial_index = 0;
  double rho_used = 0.0;
  double sigma_hat = 0.0;
  double r_hat = 0.0;
  double t_h0 = 0.0;
  std::vector<double> t_h1;
};

// Runs scenario.trials Monte Carlo trials.  Substreams are derived from
// scenario.seed and the trial index, so identical seeds give identical
// records and different methods see identical data (paired comparison).
// Trials whose estimation step fails are skipped; the run aborts with
// NumericalError once failures exceed 1% of the requested trials.
std::vector<TrialRecord> run_trials(const Scenario& scenario,
                                    const RunOptions& opts = {});

std::vector<AmplitudeSweepRecord> run_trials_amplitudes(
    const Scenario& scenario, const std::vector<double>& amplitudes,
    const RunOptions& opts = {});

struct RateRow {
  double eta_target = 0.0;
  double threshold = 0.0;  // on the t scale: mean per-trial Gamma, or the
                           // shared calibrated value for fixed-rho designs
  double pfa_emp = 0.0;
  double pfa_ci = 0.0;  // binomial 95% half-widths
  double pd_emp = 0.0;
  double pd_ci = 0.0;
  double pd_theory = 0.0;  // NaN unless attached by roc_curve
};

struct RatesTable {
  Method method = Method::Rscm;
  RhoMode rho_mode = RhoMode::Optimal;
  double rho_fixed = 0.0;  // NaN in optimal mode
  double rho_mean = 0.0;   // average shrinkage actually used
  int trials = 0;
  std::vector<RateRow> rows;
};

// Counting rule shared by every threshold choice: strict exceedance of the
// sqrt(N)-scaled statistic.  Exposed for direct use in tests and tools.
RateRow rates_at_threshold(const std::vector<TrialRecord>& records,
                           double eta_target, double r_scaled, int N);

// Empirical H0 distribution of sqrt(N)*t for a fixed-shrinkage design over
// opts.calibration_trials fresh draws (substreams salted away from the main
// trials).  Returned sorted ascending.
std::vector<double> calibrate_h0_statistics(const Scenario& scenario,
                                            const RunOptions& opts);

// Smallest calibration order statistic whose strict-exceedance rate is <= eta.
double empirical_threshold(const std::vector<double>& sorted_scaled_stats,
                           double eta);

// Empirical false-alarm / detection rates for each target eta.  Per-trial
// designs get per-record thresholds r = sigma_hat * sqrt(-2 ln eta); fixed-rho
// baselines get one shared threshold calibrated on an H0-only run whose
// substreams are salted so they never collide with the main trials.
RatesTable estimate_rates(const std::vector<TrialRecord>& records,
                          const std::vector<double>& eta_grid,
                          const Scenario& scenario,
                          const RunOptions& opts = {});

struct MethodSpec {
  Method method = Method::Rscm;
  RhoMode rho_mode = RhoMode::Optimal;
  double rho_fixed = 0.5;
};

// Asymptotic report for the scenario's population covariance: at the given
// fixed rho, or at the rho maximizing the asymptotic objective over the
// design interval (mirroring what the data-driven design estimates).
TheoryReport population_theory(const Scenario& scenario, Method method,
                               RhoMode rho_mode = RhoMode::Optimal,
                               double rho_fixed = 0.5, double kappa = 0.05,
                               double grid_step = 0.01);

// Full pipeline per method: run_trials + estimate_rates on scenario.eta_grid,
// with the asymptotic detection probability attached to each row.
std::vector<RatesTable> roc_curve(const Scenario& scenario,
                                  const std::vector<MethodSpec>& methods,
                                  const RunOptions& base_opts = {});

}  // namespace anmf
