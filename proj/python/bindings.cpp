#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "anmf/clutter.hpp"
#include "anmf/config.hpp"
#include "anmf/covariance.hpp"
#include "anmf/design.hpp"
#include "anmf/detector.hpp"
#include "anmf/errors.hpp"
#include "anmf/estimators.hpp"
#include "anmf/harness.hpp"
#include "anmf/io.hpp"
#include "anmf/marcum.hpp"
#include "anmf/rng.hpp"
#include "anmf/scenario.hpp"
#include "anmf/theory.hpp"

namespace py = pybind11;
using namespace anmf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "adaptive normalized matched filter: covariance estimation, "
            "asymptotic theory, data-driven design, Monte Carlo evaluation";
  m.attr("__version__") = version_string();

  py::register_exception<InvalidParameter>(m, "InvalidParameter",
                                           PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);

  // ---- core model -----------------------------------------------------
  m.def("build_toeplitz_covariance", &build_toeplitz_covariance, py::arg("b"),
        py::arg("N"), "Unit-diagonal Hermitian Toeplitz covariance b^(j-i)");
  m.def("steering_vector", &steering_vector, py::arg("theta_deg"),
        py::arg("N"), "Phase-ramp steering vector, ||p||^2 = N");
  m.def("hermitian_sqrt", &hermitian_sqrt, py::arg("C"));
  m.def("normalize_trace", &normalize_trace, py::arg("C"));
  m.def("is_hermitian", &is_hermitian, py::arg("A"), py::arg("rtol") = 1e-12);

  py::class_<SpectralMeasure>(m, "SpectralMeasure")
      .def_readonly("eigenvalues", &SpectralMeasure::eigenvalues)
      .def_readonly("eigenvectors", &SpectralMeasure::eigenvectors);
  m.def("spectral_measure", &spectral_measure, py::arg("C"),
        "Hermitian eigendecomposition, eigenvalues descending");

  // ---- scenario --------------------------------------------------------
  py::class_<TextureModel>(m, "TextureModel")
      .def_static("one", &TextureModel::one)
      .def_static("gamma_k", &TextureModel::gamma_k, py::arg("nu"))
      .def_readonly("nu", &TextureModel::nu)
      .def_property_readonly("is_gamma", [](const TextureModel& t) {
        return t.kind == TextureKind::GammaK;
      });

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("N", &Scenario::N)
      .def_readwrite("n", &Scenario::n)
      .def_readwrite("theta_deg", &Scenario::theta_deg)
      .def_readwrite("a", &Scenario::a)
      .def_readwrite("texture", &Scenario::texture)
      .def_readwrite("eta_grid", &Scenario::eta_grid)
      .def_readwrite("trials", &Scenario::trials)
      .def_readwrite("seed", &Scenario::seed)
      .def("set_toeplitz",
           [](Scenario& s, cxd b) { s.covariance = CovarianceSpec::toeplitz(b); },
           py::arg("b"))
      .def("set_covariance",
           [](Scenario& s, const Mat& C) {
             s.covariance = CovarianceSpec::explicit_matrix(C);
           },
           py::arg("C"))
      .def("validate", &Scenario::validate)
      .def("covariance_matrix", &Scenario::covariance_matrix)
      .def("steering", &Scenario::steering)
      .def_property_readonly("c", &Scenario::c);

  m.def(
      "make_scenario",
      [](int N, int n, cxd b, double theta, double a, std::optional<double> nu,
         std::vector<double> eta, long trials, std::uint64_t seed) {
        Scenario sc;
        sc.N = N;
        sc.n = n;
        sc.covariance = CovarianceSpec::toeplitz(b);
        sc.theta_deg = theta;
        sc.a = a;
        sc.texture = nu ? TextureModel::gamma_k(*nu) : TextureModel::one();
        sc.eta_grid = std::move(eta);
        sc.trials = trials;
        sc.seed = seed;
        sc.validate();
        return sc;
      },
      py::arg("N"), py::arg("n"), py::arg("b"), py::arg("theta"), py::arg("a"),
      py::arg("nu") = std::nullopt,
      py::arg("eta") = std::vector<double>{0.05}, py::arg("trials") = 10000,
      py::arg("seed") = 1);

  m.def(
      "secondary_data",
      [](const Scenario& sc, std::uint64_t trial) {
        auto eng_sec = substream(sc.seed, trial, StreamRole::Secondary);
        auto eng_tex = substream(sc.seed, trial, StreamRole::Texture);
        const Mat C_sqrt = hermitian_sqrt(sc.covariance_matrix());
        return generate_secondary(eng_sec, eng_tex, C_sqrt, sc.texture, sc.n)
            .secondary;
      },
      py::arg("scenario"), py::arg("trial") = 0,
      "Secondary-data matrix of one Monte Carlo trial (N x n)");

  // ---- estimators -------------------------------------------------------
  m.def("scm", &scm, py::arg("X"), "Sample covariance (1/n) X X^*");
  m.def("rscm", &rscm, py::arg("X"), py::arg("rho"),
        "Shrunk sample covariance (1-rho) SCM + rho I");

  py::class_<RteSolveReport>(m, "RteSolveReport")
      .def_readonly("estimate", &RteSolveReport::estimate)
      .def_readonly("iterations", &RteSolveReport::iterations)
      .def_readonly("final_residual", &RteSolveReport::final_residual)
      .def_readonly("converged", &RteSolveReport::converged);
  m.def("rte", &rte, py::arg("X"), py::arg("rho"), py::arg("tol") = 1e-9,
        py::arg("max_iter") = 200,
        "Regularized robust scatter fixed point");

  // ---- detector ----------------------------------------------------------
  py::class_<StatisticValue>(m, "StatisticValue")
      .def_readonly("t", &StatisticValue::t)
      .def_readonly("scaled", &StatisticValue::scaled);
  m.def("anmf_statistic", &anmf_statistic, py::arg("A"), py::arg("y"),
        py::arg("p"));
  m.def("nmf_oracle", &nmf_oracle, py::arg("C"), py::arg("y"), py::arg("p"));

  // ---- special functions --------------------------------------------------
  m.def("marcum_q1", &marcum_q1, py::arg("a"), py::arg("b"));
  m.def("pfa_theory", &pfa_theory, py::arg("r"), py::arg("sigma"));
  m.def("pd_theory", &pd_theory, py::arg("g"), py::arg("r"), py::arg("sigma"));

  // ---- asymptotic theory ---------------------------------------------------
  py::class_<TheoryReport>(m, "TheoryReport")
      .def_readonly("rho", &TheoryReport::rho)
      .def_readonly("rho_bar", &TheoryReport::rho_bar)
      .def_readonly("m", &TheoryReport::m)
      .def_readonly("gamma", &TheoryReport::gamma)
      .def_readonly("sigma2", &TheoryReport::sigma2)
      .def_readonly("g", &TheoryReport::g)
      .def_readonly("f", &TheoryReport::f)
      .def_readonly("a", &TheoryReport::a)
      .def_readonly("tau_nodes", &TheoryReport::tau_nodes)
      .def_readonly("tau_weights", &TheoryReport::tau_weights)
      .def("pfa", &TheoryReport::pfa, py::arg("r"))
      .def("pd", &TheoryReport::pd, py::arg("r"));

  m.def("solve_m",
        [](const Mat& C, double c, double rho) {
          return solve_m(spectral_measure(C), c, rho);
        },
        py::arg("C"), py::arg("c"), py::arg("rho"),
        "Resolvent fixed point m(-rho)");
  m.def("solve_gamma",
        [](const Mat& C, double rho) {
          return solve_gamma(spectral_measure(C), rho);
        },
        py::arg("C"), py::arg("rho"));
  m.def("rho_to_rho_bar", &rho_to_rho_bar, py::arg("rho"), py::arg("gamma"),
        py::arg("c"));
  m.def("theory_scm",
        py::overload_cast<const Mat&, const Vec&, double, double, double>(
            &theory_scm),
        py::arg("C"), py::arg("p"), py::arg("c"), py::arg("rho"), py::arg("a"));
  m.def("theory_rte",
        py::overload_cast<const Mat&, const Vec&, double, double, double,
                          const TextureModel&>(&theory_rte),
        py::arg("C"), py::arg("p"), py::arg("c"), py::arg("rho"), py::arg("a"),
        py::arg("texture"));

  // ---- data-driven design ----------------------------------------------------
  m.def("sigma2_hat_scm", &sigma2_hat_scm, py::arg("X"), py::arg("p"),
        py::arg("rho"));
  m.def("f_hat_scm", &f_hat_scm, py::arg("X"), py::arg("p"), py::arg("rho"));
  m.def("sigma2_hat_rte", &sigma2_hat_rte, py::arg("C_hat"), py::arg("p"),
        py::arg("rho"), py::arg("c_N"));
  m.def("f_hat_rte", &f_hat_rte, py::arg("C_hat"), py::arg("p"), py::arg("rho"),
        py::arg("c_N"));
  m.def("optimize_rho", &optimize_rho, py::arg("objective"), py::arg("lo"),
        py::arg("hi"), py::arg("grid_step") = 0.01);
  m.def("set_threshold", &set_threshold, py::arg("sigma_hat"), py::arg("eta"));

  py::class_<DesignOutput>(m, "DesignOutput")
      .def_readonly("rho_star", &DesignOutput::rho_star)
      .def_readonly("sigma_hat", &DesignOutput::sigma_hat)
      .def_readonly("r_hat", &DesignOutput::r_hat)
      .def_readonly("gamma_threshold", &DesignOutput::gamma_threshold)
      .def_readonly("objective_at_star", &DesignOutput::objective_at_star)
      .def_readonly("objective_curve", &DesignOutput::objective_curve);

  auto design_opts = [](double kappa, double grid_step, bool keep_curve) {
    DesignOptions o;
    o.kappa = kappa;
    o.grid_step = grid_step;
    o.keep_curve = keep_curve;
    return o;
  };
  m.def(
      "design_scm",
      [design_opts](const Mat& X, const Vec& p, double eta, double kappa,
                    double grid_step, bool keep_curve) {
        return design_scm(X, p, eta, design_opts(kappa, grid_step, keep_curve));
      },
      py::arg("X"), py::arg("p"), py::arg("eta"), py::arg("kappa") = 0.05,
      py::arg("grid_step") = 0.01, py::arg("keep_curve") = false);
  m.def(
      "design_rte",
      [design_opts](const Mat& X, const Vec& p, double eta, double kappa,
                    double grid_step, bool keep_curve) {
        return design_rte(X, p, eta, design_opts(kappa, grid_step, keep_curve));
      },
      py::arg("X"), py::arg("p"), py::arg("eta"), py::arg("kappa") = 0.05,
      py::arg("grid_step") = 0.01, py::arg("keep_curve") = false);

  // ---- Monte Carlo harness ------------------------------------------------
  py::enum_<Method>(m, "Method")
      .value("RSCM", Method::Rscm)
      .value("RTE", Method::Rte);
  py::enum_<RhoMode>(m, "RhoMode")
      .value("OPTIMAL", RhoMode::Optimal)
      .value("FIXED", RhoMode::Fixed);

  py::class_<MethodSpec>(m, "MethodSpec")
      .def(py::init([](Method method, RhoMode rho_mode, double rho_fixed) {
             return MethodSpec{method, rho_mode, rho_fixed};
           }),
           py::arg("method") = Method::Rscm,
           py::arg("rho_mode") = RhoMode::Optimal, py::arg("rho_fixed") = 0.5)
      .def_readwrite("method", &MethodSpec::method)
      .def_readwrite("rho_mode", &MethodSpec::rho_mode)
      .def_readwrite("rho_fixed", &MethodSpec::rho_fixed);

  py::class_<RunOptions>(m, "RunOptions")
      .def(py::init<>())
      .def_readwrite("method", &RunOptions::method)
      .def_readwrite("rho_mode", &RunOptions::rho_mode)
      .def_readwrite("rho_fixed", &RunOptions::rho_fixed)
      .def_readwrite("kappa", &RunOptions::kappa)
      .def_readwrite("grid_step", &RunOptions::grid_step)
      .def_readwrite("refine_xtol", &RunOptions::refine_xtol)
      .def_readwrite("scan_tol", &RunOptions::scan_tol)
      .def_readwrite("final_tol", &RunOptions::final_tol)
      .def_readwrite("max_iter", &RunOptions::max_iter)
      .def_readwrite("calibration_trials", &RunOptions::calibration_trials);

  py::class_<TrialRecord>(m, "TrialRecord")
      .def_readonly("trial_index", &TrialRecord::trial_index)
      .def_readonly("rho_used", &TrialRecord::rho_used)
      .def_readonly("sigma_hat", &TrialRecord::sigma_hat)
      .def_readonly("r_hat", &TrialRecord::r_hat)
      .def_readonly("t_h0", &TrialRecord::t_h0)
      .def_readonly("t_h1", &TrialRecord::t_h1);
  py::class_<AmplitudeSweepRecord>(m, "AmplitudeSweepRecord")
      .def_readonly("trial_index", &AmplitudeSweepRecord::trial_index)
      .def_readonly("rho_used", &AmplitudeSweepRecord::rho_used)
      .def_readonly("sigma_hat", &AmplitudeSweepRecord::sigma_hat)
      .def_readonly("r_hat", &AmplitudeSweepRecord::r_hat)
      .def_readonly("t_h0", &AmplitudeSweepRecord::t_h0)
      .def_readonly("t_h1", &AmplitudeSweepRecord::t_h1);

  py::class_<RateRow>(m, "RateRow")
      .def_readonly("eta_target", &RateRow::eta_target)
      .def_readonly("threshold", &RateRow::threshold)
      .def_readonly("pfa_emp", &RateRow::pfa_emp)
      .def_readonly("pfa_ci", &RateRow::pfa_ci)
      .def_readonly("pd_emp", &RateRow::pd_emp)
      .def_readonly("pd_ci", &RateRow::pd_ci)
      .def_readonly("pd_theory", &RateRow::pd_theory);
  py::class_<RatesTable>(m, "RatesTable")
      .def_readonly("method", &RatesTable::method)
      .def_readonly("rho_mode", &RatesTable::rho_mode)
      .def_readonly("rho_fixed", &RatesTable::rho_fixed)
      .def_readonly("rho_mean", &RatesTable::rho_mean)
      .def_readonly("trials", &RatesTable::trials)
      .def_readonly("rows", &RatesTable::rows);

  m.def("run_trials", &run_trials, py::arg("scenario"),
        py::arg("opts") = RunOptions{});
  m.def("run_trials_amplitudes", &run_trials_amplitudes, py::arg("scenario"),
        py::arg("amplitudes"), py::arg("opts") = RunOptions{});
  m.def("estimate_rates", &estimate_rates, py::arg("records"),
        py::arg("eta_grid"), py::arg("scenario"),
        py::arg("opts") = RunOptions{});
  m.def("rates_at_threshold", &rates_at_threshold, py::arg("records"),
        py::arg("eta_target"), py::arg("r_scaled"), py::arg("N"));
  m.def("roc_curve", &roc_curve, py::arg("scenario"), py::arg("methods"),
        py::arg("opts") = RunOptions{});
  m.def("population_theory", &population_theory, py::arg("scenario"),
        py::arg("method"), py::arg("rho_mode") = RhoMode::Optimal,
        py::arg("rho_fixed") = 0.5, py::arg("kappa") = 0.05,
        py::arg("grid_step") = 0.01);
  m.def("calibrate_h0_statistics", &calibrate_h0_statistics,
        py::arg("scenario"), py::arg("opts") = RunOptions{});
  m.def("empirical_threshold", &empirical_threshold,
        py::arg("sorted_scaled_stats"), py::arg("eta"));
}
