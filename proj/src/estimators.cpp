#include "anmf/estimators.hpp"

#include <cmath>
#include <string>

namespace anmf {

Mat scm(const Mat& X) {
  if (X.cols() < 1) throw InvalidParameter("scm: need at least one sample");
  const int N = static_cast<int>(X.rows());
  Mat R = Mat::Zero(N, N);
  R.selfadjointView<Eigen::Lower>().rankUpdate(X, 1.0 / static_cast<double>(X.cols()));
  return R.selfadjointView<Eigen::Lower>();
}

Mat rscm(const Mat& X, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw InvalidParameter("rscm: rho must lie in [0, 1], got " + std::to_string(rho));
  const int N = static_cast<int>(X.rows());
  Mat R = (1.0 - rho) * scm(X);
  R.diagonal().array() += rho;
  return R;
}

RteSolver::RteSolver(Mat X) : X_(std::move(X)) {
  if (X_.cols() < 1 || X_.rows() < 1)
    throw InvalidParameter("rte: data matrix must be nonempty");
  const int n_ = n();
  col_norm2_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    col_norm2_[i] = X_.col(i).squaredNorm();
    if (!(col_norm2_[i] > 0.0))
      throw InvalidParameter("rte: data contains a zero column (index " +
                             std::to_string(i) + ")");
  }
  d_.resize(n_);
}

void RteSolver::reset() { have_state_ = false; }

void RteSolver::rebuild(double rho) {
  const int N_ = N();
  C_.setZero(N_, N_);
  if (rho < 1.0) {
    // C = rho I + (1-rho)/n * X diag(d) X^*
    Mat scaled = X_ * d_.cwiseSqrt().asDiagonal();
    C_.selfadjointView<Eigen::Lower>().rankUpdate(scaled,
                                                  (1.0 - rho) / static_cast<double>(n()));
    C_ = C_.selfadjointView<Eigen::Lower>();
  }
  C_.diagonal().array() += rho;
}

RteSolveReport RteSolver::solve(double rho, double tol, int max_iter, bool warm) {
  const double lower = std::max(0.0, 1.0 - static_cast<double>(n()) / N());
  if (!(rho > lower && rho <= 1.0))
    throw InvalidParameter("rte: rho must lie in (max(0, 1 - n/N), 1] = (" +
                           std::to_string(lower) + ", 1], got " + std::to_string(rho));

  RteSolveReport report;
  if (rho == 1.0) {
    // the data term vanishes; the fixed point is exactly the identity
    C_ = Mat::Identity(N(), N());
    d_ = (static_cast<double>(N()) * col_norm2_.cwiseInverse());
    llt_.compute(C_);
    rho_ = rho;
    have_state_ = true;
    report.estimate = C_;
    report.iterations = 1;
    report.final_residual = 0.0;
    report.converged = true;
    return report;
  }

  Mat prev;
  if (warm && have_state_) {
    rebuild(rho);  // previous weights, new rho
    prev = C_;
  } else {
    prev = Mat::Identity(N(), N());
  }

  const int n_ = n();
  const double invN = 1.0 / static_cast<double>(N());
  int it = 0;
  double res = std::numeric_limits<double>::infinity();
  while (it < max_iter) {
    ++it;
    llt_.compute(prev);
    if (llt_.info() != Eigen::Success)
      throw NumericalError("rte: Cholesky factorization failed during iteration");
    // q_i = (1/N) x_i^* C^{-1} x_i via one triangular solve
    Mat Z = llt_.matrixL().solve(X_);
    for (int i = 0; i < n_; ++i) {
      const double q = Z.col(i).squaredNorm() * invN;
      d_[i] = 1.0 / q;
    }
    rebuild(rho);
    res = (C_ - prev).norm() / prev.norm();
    prev = C_;
    if (res <= tol) break;
  }
  llt_.compute(C_);  // factorization of the final estimate
  if (llt_.info() != Eigen::Success)
    throw NumericalError("rte: Cholesky factorization of the final estimate failed");
  rho_ = rho;
  have_state_ = true;
  report.estimate = C_;
  report.iterations = it;
  report.final_residual = res;
  report.converged = (res <= tol);
  return report;
}

Vec RteSolver::solve_inverse(const Vec& p) const { return llt_.solve(p); }

double RteSolver::weighted_quad(const Vec& u) const {
  Vec v = X_.adjoint() * u;
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += d_[i] * std::norm(v[i]);
  return s / static_cast<double>(n());
}

double RteSolver::weighted_trace() const {
  return d_.dot(col_norm2_) / static_cast<double>(n());
}

RteSolveReport rte(const Mat& X, double rho, double tol, int max_iter) {
  RteSolver solver(X);
  return solver.solve(rho, tol, max_iter, /*warm=*/false);
}

}  // namespace anmf
