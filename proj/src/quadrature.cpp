#include "anmf/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "anmf/errors.hpp"

namespace anmf {

namespace {

// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix;
// the weight of node i is mu0 * (first eigenvector component)^2.
QuadratureRule golub_welsch(const RealVec& diag, const RealVec& subdiag,
                            double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::SelfAdjointEigenSolver<RealMat> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericalError("quadrature: tridiagonal eigendecomposition failed");
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();  // ascending
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw InvalidParameter("gauss_legendre: n must be >= 1");
  RealVec diag = RealVec::Zero(n);
  RealVec sub(n - 1);
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    sub[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  return golub_welsch(diag, sub, 2.0);  // mu0 = integral of 1 over [-1,1]
}

QuadratureRule gauss_laguerre_normalized(int n, double alpha) {
  if (n < 1) throw InvalidParameter("gauss_laguerre: n must be >= 1");
  if (!(alpha > -1.0))
    throw InvalidParameter("gauss_laguerre: alpha must be > -1");
  RealVec diag(n), sub(n - 1);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k * (k + alpha));
  // mu0 = 1: weights normalized against Gamma(alpha+1), i.e. they sum to 1
  return golub_welsch(diag, sub, 1.0);
}

QuadratureRule gamma_expectation_rule(double nu, int n) {
  if (!(nu > 0.0)) throw InvalidParameter("gamma_expectation_rule: nu must be > 0");
  QuadratureRule rule = gauss_laguerre_normalized(n, nu - 1.0);
  rule.nodes /= nu;  // Gamma(nu, 1) -> Gamma(nu, 1/nu), unit mean
  return rule;
}

}  // namespace anmf
