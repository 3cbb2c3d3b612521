#pragma once

#include <Eigen/Cholesky>

#include "anmf/types.hpp"

namespace anmf {

struct StatisticValue {
  double t = 0.0;       // in [0, 1] by Cauchy-Schwarz
  double scaled = 0.0;  // sqrt(N) * t, the quantity compared against r
};

// Normalized matched filter statistic
//   t = |y^* A^{-1} p| / sqrt( (y^* A^{-1} y) (p^* A^{-1} p) )
// for Hermitian positive definite A. The same code path serves the
// known-covariance detector (A = C) and the adaptive ones (A = covariance
// estimate). Throws NumericalError with a condition estimate when A is
// numerically singular.
StatisticValue anmf_statistic(const Mat& A, const Vec& y, const Vec& p);

// Known-covariance reference detector (identical computation, named for the
// call sites where the true covariance is available).
StatisticValue nmf_oracle(const Mat& C, const Vec& y, const Vec& p);

// Factor A once, score many primaries against a fixed steering vector.
class StatisticEngine {
 public:
  StatisticEngine(const Mat& A, Vec p);

  StatisticValue evaluate(const Vec& y) const;

  double p_quad() const { return p_quad_; }  // p^* A^{-1} p

 private:
  Eigen::LLT<Mat> llt_;
  Vec p_;
  Vec u_;          // A^{-1} p
  double p_quad_;  // p^* A^{-1} p
  int N_;
};

}  // namespace anmf
