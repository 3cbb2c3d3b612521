#include "anmf/detector.hpp"

#include <cmath>
#include <string>

#include "anmf/covariance.hpp"

namespace anmf {

StatisticEngine::StatisticEngine(const Mat& A, Vec p) : p_(std::move(p)) {
  if (A.rows() != A.cols() || A.rows() != p_.size())
    throw InvalidParameter("statistic: dimension mismatch between A and p");
  if (p_.squaredNorm() == 0.0)
    throw InvalidParameter("statistic: steering vector must be nonzero");
  N_ = static_cast<int>(A.rows());
  llt_.compute(A);
  if (llt_.info() != Eigen::Success)
    throw NumericalError("statistic: matrix is not positive definite");
  const double rc = llt_.rcond();
  if (!(rc > 1e-14))
    throw NumericalError(
        "statistic: matrix is numerically singular (reciprocal condition " +
        std::to_string(rc) + ")");
  u_ = llt_.solve(p_);
  p_quad_ = p_.dot(u_).real();  // p^* A^{-1} p, real for Hermitian PD A
  if (!(p_quad_ > 0.0))
    throw NumericalError("statistic: p^* A^{-1} p must be positive");
}

StatisticValue StatisticEngine::evaluate(const Vec& y) const {
  if (y.size() != p_.size())
    throw InvalidParameter("statistic: dimension mismatch between A and y");
  if (y.squaredNorm() == 0.0)
    throw InvalidParameter("statistic: primary vector must be nonzero");
  const Vec w = llt_.solve(y);
  const double y_quad = y.dot(w).real();
  const double cross = std::abs(y.dot(u_));  // |y^* A^{-1} p|
  StatisticValue out;
  out.t = cross / std::sqrt(y_quad * p_quad_);
  if (out.t > 1.0) out.t = 1.0;  // guard the Cauchy-Schwarz bound against roundoff
  out.scaled = std::sqrt(static_cast<double>(N_)) * out.t;
  return out;
}

StatisticValue anmf_statistic(const Mat& A, const Vec& y, const Vec& p) {
  StatisticEngine engine(A, p);
  return engine.evaluate(y);
}

StatisticValue nmf_oracle(const Mat& C, const Vec& y, const Vec& p) {
  return anmf_statistic(C, y, p);
}

}  // namespace anmf
