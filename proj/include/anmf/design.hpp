#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "anmf/estimators.hpp"
#include "anmf/types.hpp"

namespace anmf {

// Interval of shrinkage values the data-driven design searches over.  The
// lower cut kappa keeps the search away from rho = 0, where the plug-in
// expressions lose consistency; the sample-deficient case additionally
// excludes shrinkage values for which the robust fixed point is undefined.
struct RhoInterval {
  double lo;
  double hi;
};

RhoInterval design_interval_scm(double kappa = 0.05);
RhoInterval design_interval_rte(double c_N, double kappa = 0.05);

// ---------------------------------------------------------------------------
// Plug-in predictors computed from secondary data alone (no knowledge of the
// true covariance).  sigma2_hat_* predicts the asymptotic H0 scale of the
// detector built from the corresponding estimator; f_hat_* is the matched
// objective whose maximizer in rho also maximizes detection probability at
// fixed false-alarm rate.
//
// ScmDesign diagonalizes the sample covariance once; every rho afterwards
// costs O(N).  RteDesign re-solves the robust fixed point, warm-starting
// from the previous shrinkage value, so sweeping an increasing rho grid is
// cheap.  All expressions are evaluated in algebraically cancelled form so
// they remain finite and smooth through rho = 1.
// ---------------------------------------------------------------------------

class ScmDesign {
 public:
  ScmDesign(const Mat& X, const Vec& p);

  double sigma2_hat(double rho) const;
  double f_hat(double rho) const;

  // Shrunk-sample-covariance detector statistic for a cell under test,
  // evaluated in the eigenbasis cached at construction.
  double statistic(double rho, const Vec& y) const;

  double c_N() const { return c_; }
  int N() const { return static_cast<int>(lam_.size()); }
  const RealVec& eigenvalues() const { return lam_; }

 private:
  struct Sums {
    double a1;    // sum w_k / d_k
    double a2l;   // sum w_k lam_k / d_k^2
    double t1;    // (1/N) sum 1 / d_k
    double t1l;   // (1/N) sum lam_k / d_k
    double corr;  // 1 - c + c * rho * t1
  };
  Sums sums(double rho) const;

  RealVec lam_;  // sample-covariance eigenvalues, descending
  RealVec w_;    // |U^* p|^2 in that eigenbasis
  Mat U_;        // eigenvectors (for statistic evaluation)
  Vec p_rot_;    // U^* p
  double c_;     // N / n
};

class RteDesign {
 public:
  // scan_tol is used for the fixed-point solves issued while scanning rho;
  // call solve_final() once the maximizer is found to tighten the estimate.
  RteDesign(const Mat& X, const Vec& p, double scan_tol = 1e-6,
            int max_iter = 200);

  double sigma2_hat(double rho);
  double f_hat(double rho);

  // Re-solve at rho with a tighter tolerance (used once at the maximizer).
  void solve_final(double rho, double tol = 1e-9);

  // Robust-estimator detector statistic at the most recently solved rho.
  double statistic(const Vec& y);

  double c_N() const { return c_; }
  int N() const { return solver_.N(); }
  double solved_rho() const { return solved_rho_; }
  RteSolver& solver() { return solver_; }

 private:
  void ensure_solved(double rho);

  RteSolver solver_;
  Vec p_;
  double scan_tol_;
  int max_iter_;
  double c_;
  double solved_rho_ = -1.0;
  Vec u_;  // C^-1 p at the solved rho, cached for statistic evaluation
  double pq_ = 0.0;
  bool stat_ready_ = false;
};

// One-shot variants matching the library-level API.  c_N = N / n is passed
// explicitly so the expressions can also be applied to an externally built
// estimate; it must equal dimension / sample-count of the data that built it.
double sigma2_hat_scm(const Mat& X, const Vec& p, double rho);
double f_hat_scm(const Mat& X, const Vec& p, double rho);
double sigma2_hat_rte(const Mat& C_hat, const Vec& p, double rho, double c_N);
double f_hat_rte(const Mat& C_hat, const Vec& p, double rho, double c_N);

// ---------------------------------------------------------------------------
// Shrinkage search: coarse grid scan followed by golden-section refinement
// around the best grid point.  Objective evaluations that throw are skipped
// (recorded in `failures`); if every evaluation fails the search throws
// NumericalError.  Ties resolve toward the smallest rho.
// ---------------------------------------------------------------------------

struct OptimizeReport {
  double rho_star = 0.0;
  double objective_at_star = 0.0;
  int evaluations = 0;
  int failures = 0;
  std::vector<std::pair<double, double>> curve;  // grid samples (rho, objective)
};

OptimizeReport optimize_rho_detailed(
    const std::function<double(double)>& objective, double lo, double hi,
    double grid_step = 0.01, double refine_xtol = 1e-5);

double optimize_rho(const std::function<double(double)>& objective, double lo,
                    double hi, double grid_step = 0.01);

// Detection threshold (on the sqrt(N)-scaled statistic) meeting a target
// false-alarm probability eta under the asymptotic H0 law with scale sigma.
double set_threshold(double sigma_hat, double eta);

// ---------------------------------------------------------------------------
// End-to-end data-driven design: pick rho maximizing the plug-in objective,
// then set the threshold for the requested false-alarm rate.
// ---------------------------------------------------------------------------

struct DesignOptions {
  double kappa = 0.05;        // lower cut of the rho search interval
  double grid_step = 0.01;    // coarse scan resolution
  double refine_xtol = 1e-5;  // golden-section bracket width at termination
  bool keep_curve = false;    // retain the scanned (rho, objective) samples
  double scan_tol = 1e-6;     // fixed-point tolerance while scanning (robust)
  double final_tol = 1e-9;    // fixed-point tolerance at the maximizer (robust)
  int max_iter = 200;
};

struct DesignOutput {
  double rho_star = 0.0;
  double sigma_hat = 0.0;        // predicted asymptotic H0 scale
  double r_hat = 0.0;            // threshold on sqrt(N) * t
  double gamma_threshold = 0.0;  // r_hat / sqrt(N), threshold on t itself
  double objective_at_star = 0.0;
  std::vector<std::pair<double, double>> objective_curve;
};

DesignOutput design_scm(const Mat& X, const Vec& p, double eta,
                        const DesignOptions& opts = {});
DesignOutput design_rte(const Mat& X, const Vec& p, double eta,
                        const DesignOptions& opts = {});

}  // namespace anmf
