#pragma once

#include <Eigen/Dense>
#include <complex>

#include "anmf/errors.hpp"

namespace anmf {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;      // complex column vector (p, y, x, w)
using Mat = Eigen::MatrixXcd;      // complex matrix; Hermitian where stated
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
struct SpectralMeasure {
  RealVec eigenvalues;   // length N, descending
  Mat eigenvectors;      // unitary, column k pairs with eigenvalues[k]

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Scalar texture law for compound-Gaussian clutter. `One` is the Gaussian
// case (tau identically 1); `GammaK` is Gamma(shape nu, scale 1/nu), i.e.
// unit mean, giving K-distributed clutter.
enum class TextureKind { One, GammaK };

struct TextureModel {
  TextureKind kind = TextureKind::One;
  double nu = 0.0;  // shape, GammaK only

  static TextureModel one() { return TextureModel{TextureKind::One, 0.0}; }

  static TextureModel gamma_k(double nu) {
    if (!(nu > 0.0))
      throw InvalidParameter("texture shape nu must be > 0");
    return TextureModel{TextureKind::GammaK, nu};
  }
};

}  // namespace anmf
