#include "anmf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "anmf/clutter.hpp"
#include "anmf/covariance.hpp"
#include "anmf/design.hpp"
#include "anmf/errors.hpp"
#include "anmf/rng.hpp"

namespace anmf {

const char* method_name(Method m) { return m == Method::Rscm ? "rscm" : "rte"; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_options(const Scenario& sc, const RunOptions& opts) {
  if (opts.rho_mode == RhoMode::Fixed) {
    if (!(opts.rho_fixed > 0.0 && opts.rho_fixed <= 1.0))
      throw InvalidParameter("run_trials: fixed rho must lie in (0, 1], got " +
                             std::to_string(opts.rho_fixed));
    if (opts.method == Method::Rte) {
      const double lower =
          std::max(0.0, 1.0 - static_cast<double>(sc.n) / sc.N);
      if (!(opts.rho_fixed > lower))
        throw InvalidParameter(
            "run_trials: fixed rho for the robust estimator must exceed "
            "max(0, 1 - n/N) = " +
            std::to_string(lower));
    }
  }
  if (!(opts.kappa > 0.0 && opts.kappa < 1.0))
    throw InvalidParameter("run_trials: kappa must lie in (0, 1)");
  if (!(opts.grid_step > 0.0))
    throw InvalidParameter("run_trials: grid_step must be positive");
}

struct TrialOutput {
  double rho_used = 0.0;
  double sigma_hat = 0.0;
  double r_hat = 0.0;
  double t_h0 = 0.0;
  std::vector<double> t_h1;
};

// One full trial: secondary draw, design fit, statistic on fresh cell draws.
// `amplitudes` may be empty (H0-only, used by threshold calibration).
TrialOutput one_trial(const Scenario& sc, const RunOptions& opts,
                      uint64_t master_seed, uint64_t trial, const Mat& C_sqrt,
                      const Vec& p, const std::vector<double>& amplitudes) {
  auto eng_sec = substream(master_seed, trial, StreamRole::Secondary);
  auto eng_tex = substream(master_seed, trial, StreamRole::Texture);
  auto eng_pri = substream(master_seed, trial, StreamRole::Primary);

  const ClutterBatch batch =
      generate_secondary(eng_sec, eng_tex, C_sqrt, sc.texture, sc.n);
  const Vec clutter0 = sample_clutter(eng_pri, C_sqrt, sc.texture);
  const Vec y0 = primary_from_clutter(clutter0, p, 0.0);
  Vec clutter1;
  if (!amplitudes.empty()) clutter1 = sample_clutter(eng_pri, C_sqrt, sc.texture);

  TrialOutput out;
  if (opts.method == Method::Rscm) {
    ScmDesign ctx(batch.secondary, p);
    double rho = opts.rho_fixed;
    if (opts.rho_mode == RhoMode::Optimal) {
      const RhoInterval iv = design_interval_scm(opts.kappa);
      rho = optimize_rho_detailed([&](double r) { return ctx.f_hat(r); },
                                  iv.lo, iv.hi, opts.grid_step,
                                  opts.refine_xtol)
                .rho_star;
    }
    out.rho_used = rho;
    out.sigma_hat = std::sqrt(ctx.sigma2_hat(rho));
    out.t_h0 = ctx.statistic(rho, y0);
    out.t_h1.reserve(amplitudes.size());
    for (double a : amplitudes)
      out.t_h1.push_back(ctx.statistic(rho, primary_from_clutter(clutter1, p, a)));
  } else {
    RteDesign ctx(batch.secondary, p, opts.scan_tol, opts.max_iter);
    double rho = opts.rho_fixed;
    if (opts.rho_mode == RhoMode::Optimal) {
      const RhoInterval iv = design_interval_rte(ctx.c_N(), opts.kappa);
      rho = optimize_rho_detailed([&](double r) { return ctx.f_hat(r); },
                                  iv.lo, iv.hi, opts.grid_step,
                                  opts.refine_xtol)
                .rho_star;
    }
    ctx.solve_final(rho, opts.final_tol);
    out.rho_used = rho;
    out.sigma_hat = std::sqrt(ctx.sigma2_hat(rho));
    out.t_h0 = ctx.statistic(y0);
    out.t_h1.reserve(amplitudes.size());
    for (double a : amplitudes)
      out.t_h1.push_back(ctx.statistic(primary_from_clutter(clutter1, p, a)));
  }
  const double eta_ref = sc.eta_grid.empty() ? kNaN : sc.eta_grid.front();
  out.r_hat =
      std::isnan(eta_ref) ? kNaN : set_threshold(out.sigma_hat, eta_ref);
  return out;
}

// Runs the per-trial loop with the >1%-failures abort shared by all variants.
template <typename Emit>
void trial_loop(const Scenario& sc, const RunOptions& opts,
                uint64_t master_seed, long trials,
                const std::vector<double>& amplitudes, Emit&& emit) {
  const Mat C_sqrt = hermitian_sqrt(sc.covariance_matrix());
  const Vec p = sc.steering();
  const double max_failures = 0.01 * static_cast<double>(trials);
  long failures = 0;
  for (long t = 0; t < trials; ++t) {
    try {
      emit(static_cast<int>(t),
           one_trial(sc, opts, master_seed, static_cast<uint64_t>(t), C_sqrt,
                     p, amplitudes));
    } catch (const std::exception& e) {
      ++failures;
      if (static_cast<double>(failures) > max_failures)
        throw NumericalError("run_trials: " + std::to_string(failures) +
                             " of " + std::to_string(t + 1) +
                             " trials failed; last error: " + e.what());
    }
  }
}

}  // namespace

std::vector<TrialRecord> run_trials(const Scenario& sc,
                                    const RunOptions& opts) {
  sc.validate();
  validate_options(sc, opts);
  std::vector<TrialRecord> records;
  records.reserve(static_cast<size_t>(sc.trials));
  trial_loop(sc, opts, sc.seed, sc.trials, {sc.a},
             [&](int t, TrialOutput&& o) {
               records.push_back({t, o.rho_used, o.sigma_hat, o.r_hat, o.t_h0,
                                  o.t_h1.front()});
             });
  return records;
}

std::vector<AmplitudeSweepRecord> run_trials_amplitudes(
    const Scenario& sc, const std::vector<double>& amplitudes,
    const RunOptions& opts) {
  sc.validate();
  validate_options(sc, opts);
  if (amplitudes.empty())
    throw InvalidParameter("run_trials: amplitude list must be nonempty");
  for (double a : amplitudes)
    if (!(a >= 0.0))
      throw InvalidParameter("run_trials: amplitudes must be nonnegative");
  std::vector<AmplitudeSweepRecord> records;
  records.reserve(static_cast<size_t>(sc.trials));
  trial_loop(sc, opts, sc.seed, sc.trials, amplitudes,
             [&](int t, TrialOutput&& o) {
               records.push_back({t, o.rho_used, o.sigma_hat, o.r_hat, o.t_h0,
                                  std::move(o.t_h1)});
             });
  return records;
}

RateRow rates_at_threshold(const std::vector<TrialRecord>& records,
                           double eta_target, double r_scaled, int N) {
  if (records.empty())
    throw InvalidParameter("rates: record list must be nonempty");
  const double M = static_cast<double>(records.size());
  const double s = std::sqrt(static_cast<double>(N));
  int nfa = 0, nd = 0;
  for (const TrialRecord& rec : records) {
    if (s * rec.t_h0 > r_scaled) ++nfa;
    if (s * rec.t_h1 > r_scaled) ++nd;
  }
  RateRow row;
  row.eta_target = eta_target;
  row.threshold = r_scaled / s;
  row.pfa_emp = nfa / M;
  row.pd_emp = nd / M;
  row.pfa_ci = 1.96 * std::sqrt(row.pfa_emp * (1.0 - row.pfa_emp) / M);
  row.pd_ci = 1.96 * std::sqrt(row.pd_emp * (1.0 - row.pd_emp) / M);
  row.pd_theory = kNaN;
  return row;
}

std::vector<double> calibrate_h0_statistics(const Scenario& sc,
                                            const RunOptions& opts) {
  sc.validate();
  validate_options(sc, opts);
  if (opts.calibration_trials < 1)
    throw InvalidParameter("calibration: calibration_trials must be >= 1");
  const uint64_t cal_seed =
      splitmix64(sc.seed ^ static_cast<uint64_t>(StreamRole::Calibration));
  const double s = std::sqrt(static_cast<double>(sc.N));
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(opts.calibration_trials));
  trial_loop(sc, opts, cal_seed, opts.calibration_trials, {},
             [&](int, TrialOutput&& o) { vals.push_back(s * o.t_h0); });
  if (vals.empty())
    throw NumericalError("calibration: no statistics were produced");
  std::sort(vals.begin(), vals.end());
  return vals;
}

double empirical_threshold(const std::vector<double>& sorted_scaled_stats,
                           double eta) {
  if (sorted_scaled_stats.empty())
    throw InvalidParameter("calibration: empty statistic sample");
  const auto M = static_cast<long>(sorted_scaled_stats.size());
  long idx = M - 1 - static_cast<long>(std::floor(eta * static_cast<double>(M)));
  idx = std::clamp(idx, long{0}, M - 1);
  return sorted_scaled_stats[static_cast<size_t>(idx)];
}

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0))
    throw InvalidParameter("estimate_rates: eta must lie in (0, 1), got " +
                           std::to_string(eta));
}

}  // namespace

RatesTable estimate_rates(const std::vector<TrialRecord>& records,
                          const std::vector<double>& eta_grid,
                          const Scenario& sc, const RunOptions& opts) {
  if (records.empty())
    throw InvalidParameter("estimate_rates: record list must be nonempty");
  RatesTable tab;
  tab.method = opts.method;
  tab.rho_mode = opts.rho_mode;
  tab.rho_fixed = opts.rho_mode == RhoMode::Fixed ? opts.rho_fixed : kNaN;
  tab.trials = static_cast<int>(records.size());
  double rho_sum = 0.0;
  for (const TrialRecord& rec : records) rho_sum += rec.rho_used;
  tab.rho_mean = rho_sum / static_cast<double>(records.size());

  const double M = static_cast<double>(records.size());
  const double s = std::sqrt(static_cast<double>(sc.N));

  if (opts.rho_mode == RhoMode::Optimal) {
    for (double eta : eta_grid) {
      check_eta(eta);
      const double q = std::sqrt(-2.0 * std::log(eta));
      int nfa = 0, nd = 0;
      double gamma_sum = 0.0;
      for (const TrialRecord& rec : records) {
        const double r = rec.sigma_hat * q;  // this trial's threshold
        gamma_sum += r / s;
        if (s * rec.t_h0 > r) ++nfa;
        if (s * rec.t_h1 > r) ++nd;
      }
      RateRow row;
      row.eta_target = eta;
      row.threshold = gamma_sum / M;
      row.pfa_emp = nfa / M;
      row.pd_emp = nd / M;
      row.pfa_ci = 1.96 * std::sqrt(row.pfa_emp * (1.0 - row.pfa_emp) / M);
      row.pd_ci = 1.96 * std::sqrt(row.pd_emp * (1.0 - row.pd_emp) / M);
      row.pd_theory = kNaN;
      tab.rows.push_back(row);
    }
  } else {
    const std::vector<double> cal = calibrate_h0_statistics(sc, opts);
    for (double eta : eta_grid) {
      check_eta(eta);
      tab.rows.push_back(
          rates_at_threshold(records, eta, empirical_threshold(cal, eta), sc.N));
    }
  }
  return tab;
}

TheoryReport population_theory(const Scenario& sc, Method method,
                               RhoMode rho_mode, double rho_fixed, double kappa,
                               double grid_step) {
  sc.validate();
  const SpectralMeasure sm = spectral_measure(sc.covariance_matrix());
  const Vec p = sc.steering();
  const double c = sc.c();
  auto eval = [&](double rho) {
    return method == Method::Rscm
               ? theory_scm(sm, p, c, rho, sc.a)
               : theory_rte(sm, p, c, rho, sc.a, sc.texture);
  };
  double rho = rho_fixed;
  if (rho_mode == RhoMode::Optimal) {
    const RhoInterval iv = method == Method::Rscm
                               ? design_interval_scm(kappa)
                               : design_interval_rte(c, kappa);
    rho = optimize_rho([&](double r) { return eval(r).f; }, iv.lo, iv.hi,
                       grid_step);
  }
  return eval(rho);
}

std::vector<RatesTable> roc_curve(const Scenario& sc,
                                  const std::vector<MethodSpec>& methods,
                                  const RunOptions& base_opts) {
  std::vector<RatesTable> out;
  out.reserve(methods.size());
  for (const MethodSpec& ms : methods) {
    RunOptions opts = base_opts;
    opts.method = ms.method;
    opts.rho_mode = ms.rho_mode;
    opts.rho_fixed = ms.rho_fixed;
    const std::vector<TrialRecord> records = run_trials(sc, opts);
    RatesTable tab = estimate_rates(records, sc.eta_grid, sc, opts);
    const TheoryReport th = population_theory(
        sc, ms.method, ms.rho_mode, ms.rho_fixed, opts.kappa, opts.grid_step);
    const double sigma = std::sqrt(th.sigma2);
    for (RateRow& row : tab.rows)
      row.pd_theory = th.pd(set_threshold(sigma, row.eta_target));
    out.push_back(std::move(tab));
  }
  return out;
}

}  // namespace anmf
