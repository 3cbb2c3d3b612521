#pragma once

#include "anmf/types.hpp"

namespace anmf {

// True within `rtol` relative to the largest entry magnitude.
bool is_hermitian(const Mat& A, double rtol = 1e-12);

// Toeplitz covariance with unit diagonal: entry (i,j) = b^(j-i) for i <= j
// and conj(b^(i-j)) below the diagonal. Requires |b| < 1; the result is
// Hermitian positive definite with (1/N) tr C = 1.
Mat build_toeplitz_covariance(cxd b, int N);

// Phase-ramp steering vector, entry k = exp(-i*pi*k*sin(theta)), k = 0..N-1.
// Angle in degrees. Unit-modulus entries, so the squared norm is exactly N.
Vec steering_vector(double theta_deg, int N);

// Hermitian PSD square root via spectral decomposition. Eigenvalues within
// -1e-8 * max of zero are clipped to zero; anything more negative is an
// error.
Mat hermitian_sqrt(const Mat& C);

// Dense Hermitian eigendecomposition, eigenvalues descending.
// Throws InvalidParameter if the input is not Hermitian.
SpectralMeasure spectral_measure(const Mat& C);

// Rescale so that (1/N) tr C = 1 (used when ingesting explicit matrices;
// every statistic here is invariant to the scale of C).
Mat normalize_trace(const Mat& C);

}  // namespace anmf
