#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "anmf/design.hpp"
#include "anmf/errors.hpp"
#include "anmf/harness.hpp"
#include "anmf/marcum.hpp"

using namespace anmf;

namespace {

Scenario small_scenario(long trials, double a = 0.9,
                        std::uint64_t seed = 7777) {
  Scenario sc;
  sc.N = 12;
  sc.n = 24;
  sc.covariance = CovarianceSpec::toeplitz(cxd(0.0, 0.8));
  sc.theta_deg = 20.0;
  sc.a = a;
  sc.eta_grid = {0.05};
  sc.trials = trials;
  sc.seed = seed;
  return sc;
}

// two-sample Kolmogorov-Smirnov statistic
double ks_statistic(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    if (x[i] <= y[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  return d;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("zero trials produce an empty record list") {
  Scenario sc = small_scenario(0);
  const auto records = run_trials(sc);
  CHECK(records.empty());
}

TEST_CASE("identical master seeds give bitwise-identical records") {
  Scenario sc = small_scenario(50);
  RunOptions opts;
  opts.grid_step = 0.05;
  const auto r1 = run_trials(sc, opts);
  const auto r2 = run_trials(sc, opts);
  REQUIRE(r1.size() == r2.size());
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].trial_index == r2[i].trial_index);
    CHECK(r1[i].rho_used == r2[i].rho_used);
    CHECK(r1[i].sigma_hat == r2[i].sigma_hat);
    CHECK(r1[i].r_hat == r2[i].r_hat);
    CHECK(r1[i].t_h0 == r2[i].t_h0);
    CHECK(r1[i].t_h1 == r2[i].t_h1);
  }
}

TEST_CASE("different seeds give different records") {
  Scenario sc1 = small_scenario(5, 0.9, 1);
  Scenario sc2 = small_scenario(5, 0.9, 2);
  RunOptions opts;
  opts.grid_step = 0.05;
  CHECK(run_trials(sc1, opts)[0].t_h0 != run_trials(sc2, opts)[0].t_h0);
}

TEST_CASE("record fields satisfy their invariants") {
  Scenario sc = small_scenario(100);
  RunOptions opts;
  opts.grid_step = 0.05;
  const auto records = run_trials(sc, opts);
  REQUIRE(records.size() == 100);
  const double q = std::sqrt(-2.0 * std::log(sc.eta_grid.front()));
  for (const TrialRecord& rec : records) {
    CHECK(rec.t_h0 >= 0.0);
    CHECK(rec.t_h0 <= 1.0);
    CHECK(rec.t_h1 >= 0.0);
    CHECK(rec.t_h1 <= 1.0);
    CHECK(rec.rho_used >= opts.kappa);
    CHECK(rec.rho_used <= 1.0);
    CHECK(rec.sigma_hat > 0.0);
    CHECK(rec.r_hat == doctest::Approx(rec.sigma_hat * q).epsilon(1e-13));
  }
}

TEST_CASE("with no target the two statistics are identically distributed") {
  Scenario sc;
  sc.N = 16;
  sc.n = 32;
  sc.covariance = CovarianceSpec::toeplitz(cxd(0.0, 0.9));
  sc.theta_deg = 20.0;
  sc.a = 0.0;
  sc.eta_grid = {0.05};
  sc.trials = 10000;
  sc.seed = 99;
  RunOptions opts;
  opts.grid_step = 0.05;
  const auto records = run_trials(sc, opts);
  std::vector<double> h0, h1;
  h0.reserve(records.size());
  h1.reserve(records.size());
  for (const TrialRecord& rec : records) {
    h0.push_back(rec.t_h0);
    h1.push_back(rec.t_h1);
  }
  // 0.035 is well above the ~0.028 critical value at significance 1e-3
  CHECK(ks_statistic(h0, h1) < 0.035);
}

TEST_CASE("amplitude sweep shares the design and orders mean statistics") {
  Scenario sc = small_scenario(400, 0.9);
  RunOptions opts;
  opts.grid_step = 0.05;
  const std::vector<double> amps = {0.3, 0.9, 1.8};
  const auto sweep = run_trials_amplitudes(sc, amps, opts);
  REQUIRE(sweep.size() == 400);
  const auto single = run_trials(sc, opts);  // sc.a = 0.9 = amps[1]
  double mean0 = 0.0, mean1 = 0.0, mean2 = 0.0;
  for (size_t i = 0; i < sweep.size(); ++i) {
    REQUIRE(sweep[i].t_h1.size() == 3);
    // the same substreams drive both runs, so the middle amplitude matches
    // the single-amplitude records exactly
    CHECK(sweep[i].t_h0 == single[i].t_h0);
    CHECK(sweep[i].t_h1[1] == single[i].t_h1);
    CHECK(sweep[i].rho_used == single[i].rho_used);
    mean0 += sweep[i].t_h1[0];
    mean1 += sweep[i].t_h1[1];
    mean2 += sweep[i].t_h1[2];
  }
  CHECK(mean0 < mean1);
  CHECK(mean1 < mean2);
}

TEST_CASE("invalid run options are rejected up front") {
  Scenario sc = small_scenario(10);
  RunOptions opts;
  opts.rho_mode = RhoMode::Fixed;
  opts.rho_fixed = 1.5;
  CHECK_THROWS_AS(run_trials(sc, opts), InvalidParameter);
  opts.rho_fixed = 0.0;
  CHECK_THROWS_AS(run_trials(sc, opts), InvalidParameter);

  // robust estimator: fixed shrinkage below the existence bound
  Scenario deficient = small_scenario(10);
  deficient.N = 12;
  deficient.n = 6;  // bound max(0, 1 - n/N) = 0.5
  RunOptions ropts;
  ropts.method = Method::Rte;
  ropts.rho_mode = RhoMode::Fixed;
  ropts.rho_fixed = 0.4;
  CHECK_THROWS_AS(run_trials(deficient, ropts), InvalidParameter);

  CHECK_THROWS_AS(run_trials_amplitudes(sc, {}, RunOptions{}), InvalidParameter);
  CHECK_THROWS_AS(run_trials_amplitudes(sc, {-0.5}, RunOptions{}),
                  InvalidParameter);
}

TEST_CASE("counting rule at extreme thresholds") {
  Scenario sc = small_scenario(60);
  RunOptions opts;
  opts.grid_step = 0.05;
  const auto records = run_trials(sc, opts);
  const RateRow low = rates_at_threshold(records, 0.5, 0.0, sc.N);
  CHECK(low.pfa_emp == 1.0);
  CHECK(low.pd_emp == 1.0);
  const RateRow high =
      rates_at_threshold(records, 0.5, std::sqrt(double(sc.N)) + 1.0, sc.N);
  CHECK(high.pfa_emp == 0.0);
  CHECK(high.pd_emp == 0.0);
}

TEST_CASE("counting rule reproduces hand-computed rates") {
  std::vector<TrialRecord> records;
  const int N = 4;  // sqrt(N) = 2
  // scaled t_h0: 0.1, 0.8, 1.2; scaled t_h1: 0.8, 1.4, 1.8
  records.push_back({0, 0.5, 1.0, 1.0, 0.05, 0.40});
  records.push_back({1, 0.5, 1.0, 1.0, 0.40, 0.70});
  records.push_back({2, 0.5, 1.0, 1.0, 0.60, 0.90});
  const RateRow row = rates_at_threshold(records, 0.123, 0.7, N);
  CHECK(row.eta_target == 0.123);
  CHECK(row.threshold == doctest::Approx(0.35));
  CHECK(row.pfa_emp == doctest::Approx(2.0 / 3.0));
  CHECK(row.pd_emp == doctest::Approx(1.0));
  CHECK(row.pfa_ci ==
        doctest::Approx(1.96 * std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / 3.0)));
  CHECK(row.pd_ci == doctest::Approx(0.0));
}

TEST_CASE("empirical threshold picks the smallest value meeting the rate") {
  const std::vector<double> sorted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  // strict exceedance of 8 is 2/10 = 0.2
  CHECK(empirical_threshold(sorted, 0.2) == doctest::Approx(8.0));
  // eta below 1/M: no value may be exceeded -> the maximum
  CHECK(empirical_threshold(sorted, 0.05) == doctest::Approx(10.0));
  CHECK(empirical_threshold(sorted, 0.95) == doctest::Approx(1.0));
  CHECK_THROWS_AS(empirical_threshold({}, 0.1), InvalidParameter);
}

TEST_CASE("per-trial thresholds aggregate exactly as recomputed by hand") {
  Scenario sc = small_scenario(250);
  sc.eta_grid = {0.02, 0.1};
  RunOptions opts;
  opts.grid_step = 0.05;
  const auto records = run_trials(sc, opts);
  const RatesTable tab = estimate_rates(records, sc.eta_grid, sc, opts);
  REQUIRE(tab.rows.size() == 2);
  CHECK(tab.trials == 250);
  CHECK(std::isnan(tab.rho_fixed));

  const double s = std::sqrt(double(sc.N));
  for (size_t k = 0; k < sc.eta_grid.size(); ++k) {
    const double eta = sc.eta_grid[k];
    const double q = std::sqrt(-2.0 * std::log(eta));
    double nfa = 0, nd = 0, gamma_sum = 0.0;
    for (const TrialRecord& rec : records) {
      const double r = rec.sigma_hat * q;
      gamma_sum += r / s;
      if (s * rec.t_h0 > r) ++nfa;
      if (s * rec.t_h1 > r) ++nd;
    }
    CHECK(tab.rows[k].eta_target == eta);
    CHECK(tab.rows[k].pfa_emp == doctest::Approx(nfa / 250.0));
    CHECK(tab.rows[k].pd_emp == doctest::Approx(nd / 250.0));
    CHECK(tab.rows[k].threshold == doctest::Approx(gamma_sum / 250.0));
    // integer counts divided by the trial count
    CHECK(tab.rows[k].pfa_emp * 250.0 ==
          doctest::Approx(std::round(tab.rows[k].pfa_emp * 250.0)));
  }
}

TEST_CASE("fixed-shrinkage designs use one shared calibrated threshold") {
  Scenario sc = small_scenario(200);
  RunOptions opts;
  opts.rho_mode = RhoMode::Fixed;
  opts.rho_fixed = 0.5;
  opts.calibration_trials = 2000;
  const auto records = run_trials(sc, opts);
  const RatesTable tab = estimate_rates(records, sc.eta_grid, sc, opts);
  REQUIRE(tab.rows.size() == 1);
  CHECK(tab.rho_fixed == doctest::Approx(0.5));
  CHECK(tab.rho_mean == doctest::Approx(0.5));

  const std::vector<double> cal = calibrate_h0_statistics(sc, opts);
  CHECK(static_cast<int>(cal.size()) == opts.calibration_trials);
  CHECK(std::is_sorted(cal.begin(), cal.end()));
  const double r = empirical_threshold(cal, sc.eta_grid.front());
  CHECK(tab.rows[0].threshold ==
        doctest::Approx(r / std::sqrt(double(sc.N))).epsilon(1e-13));
  // the calibrated threshold actually controls the false-alarm rate
  CHECK(std::abs(tab.rows[0].pfa_emp - sc.eta_grid.front()) < 0.05);
}

TEST_CASE("calibration stream never collides with the measurement stream") {
  Scenario sc = small_scenario(50);
  RunOptions opts;
  opts.rho_mode = RhoMode::Fixed;
  opts.rho_fixed = 0.5;
  opts.calibration_trials = 50;
  const auto records = run_trials(sc, opts);
  const std::vector<double> cal = calibrate_h0_statistics(sc, opts);
  const double s = std::sqrt(double(sc.N));
  for (const TrialRecord& rec : records)
    for (double v : cal) CHECK(v != s * rec.t_h0);
}

TEST_CASE("population report maximizes the objective in optimal mode") {
  Scenario sc = small_scenario(10);
  const TheoryReport best = population_theory(sc, Method::Rscm);
  for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    CAPTURE(rho);
    const TheoryReport fixed =
        population_theory(sc, Method::Rscm, RhoMode::Fixed, rho);
    CHECK(fixed.rho == doctest::Approx(rho));
    CHECK(best.f >= fixed.f - 1e-9);
  }
  const TheoryReport robust = population_theory(sc, Method::Rte);
  CHECK(robust.f > 0.0);
  CHECK(robust.rho_bar <= 1.0);
}

TEST_CASE("roc tables attach the asymptotic detection value and stay monotone") {
  Scenario sc = small_scenario(400);
  sc.eta_grid = {0.01, 0.05, 0.2};
  RunOptions opts;
  opts.grid_step = 0.05;
  const auto tables = roc_curve(sc, {MethodSpec{Method::Rscm, RhoMode::Optimal, 0.5}}, opts);
  REQUIRE(tables.size() == 1);
  const RatesTable& tab = tables[0];
  REQUIRE(tab.rows.size() == 3);
  for (size_t k = 0; k < 3; ++k) {
    CHECK(std::isfinite(tab.rows[k].pd_theory));
    CHECK(tab.rows[k].pd_theory > 0.0);
    CHECK(tab.rows[k].pd_theory <= 1.0);
    if (k > 0) {
      // larger false-alarm budget -> lower threshold -> higher rates
      CHECK(tab.rows[k].pfa_emp >= tab.rows[k - 1].pfa_emp);
      CHECK(tab.rows[k].pd_emp >= tab.rows[k - 1].pd_emp);
      CHECK(tab.rows[k].pd_theory >= tab.rows[k - 1].pd_theory);
    }
  }
}

TEST_CASE("paired methods consume identical data streams") {
  Scenario sc = small_scenario(120);
  sc.texture = TextureModel::gamma_k(0.5);
  RunOptions opts;
  opts.grid_step = 0.05;
  opts.calibration_trials = 1500;
  const auto tables =
      roc_curve(sc,
                {MethodSpec{Method::Rte, RhoMode::Optimal, 0.5},
                 MethodSpec{Method::Rte, RhoMode::Fixed, 0.5}},
                opts);
  REQUIRE(tables.size() == 2);
  CHECK(tables[0].trials == tables[1].trials);
  CHECK(tables[0].rho_mode == RhoMode::Optimal);
  CHECK(tables[1].rho_mode == RhoMode::Fixed);
  CHECK(tables[1].rho_mean == doctest::Approx(0.5));
  // identical substreams: rerunning either spec reproduces its table exactly
  const auto again =
      roc_curve(sc, {MethodSpec{Method::Rte, RhoMode::Fixed, 0.5}}, opts);
  CHECK(again[0].rows[0].pfa_emp == tables[1].rows[0].pfa_emp);
  CHECK(again[0].rows[0].pd_emp == tables[1].rows[0].pd_emp);
}

}  // TEST_SUITE
