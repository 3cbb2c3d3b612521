#pragma once

#include <Eigen/Cholesky>

#include "anmf/types.hpp"

namespace anmf {

// Sample covariance (1/n) sum_i x_i x_i^*.
Mat scm(const Mat& X);

// Shrinkage of the SCM toward identity: (1-rho) scm(X) + rho I, rho in [0,1].
// Smallest eigenvalue is >= rho.
Mat rscm(const Mat& X, double rho);

struct RteSolveReport {
  Mat estimate;           // fixed point, lambda_min >= rho
  int iterations = 0;
  double final_residual = 0.0;  // relative Frobenius change of the last step
  bool converged = false;
};

// Regularized Tyler fixed point
//   C <- (1-rho) (1/n) sum_i x_i x_i^* / ((1/N) x_i^* C^{-1} x_i) + rho I
// iterated from C = I until the relative Frobenius change is <= tol.
// Exists and is unique for rho in (max(0, 1 - n/N), 1].
RteSolveReport rte(const Mat& X, double rho, double tol = 1e-9,
                   int max_iter = 200);

// Reusable solver: keeps the data, workspace, and the per-sample weights
//   d_i = 1 / ((1/N) x_i^* C^{-1} x_i)
// of the last solve, so a sweep over nearby rho values warm-starts instead
// of re-converging from identity. Also exposes the quadratic forms the
// design layer needs, computed from the cached Cholesky factorization, plus
// cancellation-free building blocks for the near-rho=1 regime (see
// design.cpp).
class RteSolver {
 public:
  explicit RteSolver(Mat X);

  // Solves at `rho`; starts from the previous solution's weights when
  // warm = true and a previous solve exists.
  RteSolveReport solve(double rho, double tol = 1e-9, int max_iter = 200,
                       bool warm = true);

  // Drop the warm-start state (next solve starts from identity).
  void reset();

  int N() const { return static_cast<int>(X_.rows()); }
  int n() const { return static_cast<int>(X_.cols()); }
  const Mat& data() const { return X_; }

  // All of the following refer to the estimate of the most recent solve().
  const Mat& estimate() const { return C_; }
  double last_rho() const { return rho_; }
  double trace() const { return C_.trace().real(); }

  // u = C^{-1} p via the cached factorization.
  Vec solve_inverse(const Vec& p) const;

  // (1/n) sum_i d_i |x_i^* u|^2  ==  u^* (C - rho I) u / (1 - rho), computed
  // from the weighted data so it stays exact as rho -> 1.
  double weighted_quad(const Vec& u) const;

  // (1/n) sum_i d_i ||x_i||^2  ==  (tr C - rho N) / (1 - rho), same form.
  double weighted_trace() const;

 private:
  void rebuild(double rho);  // C_ from current weights d_

  Mat X_;
  RealVec col_norm2_;  // ||x_i||^2, fixed
  RealVec d_;          // per-sample weights of the current estimate
  Mat C_;
  Eigen::LLT<Mat> llt_;
  double rho_ = -1.0;
  bool have_state_ = false;
};

}  // namespace anmf
