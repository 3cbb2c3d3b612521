#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "anmf/types.hpp"

namespace anmf {

// Clutter covariance specification: either the one-parameter Toeplitz model
// (unit diagonal, parameter b with |b| < 1) or an explicit Hermitian matrix
// (trace-normalized on use).
struct CovarianceSpec {
  std::variant<cxd, Mat> value = cxd(0.0, 0.0);

  static CovarianceSpec toeplitz(cxd b) { return CovarianceSpec{b}; }
  static CovarianceSpec explicit_matrix(Mat C) { return CovarianceSpec{std::move(C)}; }

  bool is_toeplitz() const { return std::holds_alternative<cxd>(value); }
};

// Full experiment description shared by the theory, design, and Monte Carlo
// layers.
struct Scenario {
  int N = 0;                  // dimension
  int n = 0;                  // secondary sample count
  CovarianceSpec covariance;  // Toeplitz(b) or explicit matrix
  double theta_deg = 0.0;     // steering angle, degrees
  double a = 0.0;             // signal amplitude (alpha = a / sqrt(N))
  TextureModel texture = TextureModel::one();
  std::vector<double> eta_grid;  // false-alarm targets
  long trials = 10000;
  std::uint64_t seed = 1;

  double c() const { return static_cast<double>(N) / static_cast<double>(n); }

  // Throws InvalidParameter naming the offending field.
  void validate() const;

  // The (trace-normalized) covariance matrix C.
  Mat covariance_matrix() const;

  // Steering vector a(theta) of length N.
  Vec steering() const;
};

}  // namespace anmf
