#include "anmf/covariance.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace anmf {

bool is_hermitian(const Mat& A, double rtol) {
  if (A.rows() != A.cols()) return false;
  double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (A - A.adjoint()).cwiseAbs().maxCoeff() <= rtol * scale;
}

Mat build_toeplitz_covariance(cxd b, int N) {
  if (N < 1) throw InvalidParameter("covariance dimension N must be >= 1");
  if (!(std::abs(b) < 1.0))
    throw InvalidParameter("toeplitz parameter b must satisfy |b| < 1, got |b| = " +
                           std::to_string(std::abs(b)));
  // first row: 1, b, b^2, ... ; column side is the conjugate
  Eigen::VectorXcd pows(N);
  pows[0] = cxd(1.0, 0.0);
  for (int k = 1; k < N; ++k) pows[k] = pows[k - 1] * b;

  Mat C(N, N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i)
      C(i, j) = (i <= j) ? pows[j - i] : std::conj(pows[i - j]);
  }
  return C;
}

Vec steering_vector(double theta_deg, int N) {
  if (N < 1) throw InvalidParameter("steering dimension N must be >= 1");
  const double s = std::sin(theta_deg * std::numbers::pi / 180.0);
  Vec p(N);
  for (int k = 0; k < N; ++k) {
    const double phase = -std::numbers::pi * k * s;
    p[k] = cxd(std::cos(phase), std::sin(phase));
  }
  return p;
}

SpectralMeasure spectral_measure(const Mat& C) {
  if (!is_hermitian(C))
    throw InvalidParameter("spectral_measure: input matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectral_measure: eigendecomposition failed");
  const int N = static_cast<int>(C.rows());
  SpectralMeasure sm;
  sm.eigenvalues = es.eigenvalues().reverse();  // ascending -> descending
  sm.eigenvectors.resize(N, N);
  for (int k = 0; k < N; ++k)
    sm.eigenvectors.col(k) = es.eigenvectors().col(N - 1 - k);
  return sm;
}

Mat hermitian_sqrt(const Mat& C) {
  SpectralMeasure sm = spectral_measure(C);
  const double lmax = sm.eigenvalues.size() ? sm.eigenvalues[0] : 0.0;
  RealVec roots(sm.eigenvalues.size());
  for (int k = 0; k < sm.eigenvalues.size(); ++k) {
    double lam = sm.eigenvalues[k];
    if (lam < -1e-8 * std::max(lmax, 0.0))
      throw NumericalError("hermitian_sqrt: matrix is not PSD (eigenvalue " +
                           std::to_string(lam) + ")");
    roots[k] = std::sqrt(std::max(lam, 0.0));
  }
  return sm.eigenvectors * roots.asDiagonal() * sm.eigenvectors.adjoint();
}

Mat normalize_trace(const Mat& C) {
  const double tr = C.trace().real();
  if (!(tr > 0.0))
    throw InvalidParameter("normalize_trace: matrix trace must be positive");
  return C * (static_cast<double>(C.rows()) / tr);
}

}  // namespace anmf
