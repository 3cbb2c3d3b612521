#include "anmf/scenario.hpp"

#include <cmath>
#include <string>

#include "anmf/covariance.hpp"

namespace anmf {

void Scenario::validate() const {
  if (N < 2) throw InvalidParameter("N must be >= 2");
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (covariance.is_toeplitz()) {
    const cxd b = std::get<cxd>(covariance.value);
    if (!(std::abs(b) < 1.0)) throw InvalidParameter("b must satisfy |b| < 1");
  } else {
    const Mat& C = std::get<Mat>(covariance.value);
    if (C.rows() != N || C.cols() != N)
      throw InvalidParameter("explicit covariance must be N x N");
    if (!is_hermitian(C, 1e-12))
      throw InvalidParameter("explicit covariance must be Hermitian");
  }
  if (!(a >= 0.0)) throw InvalidParameter("a must be >= 0");
  if (texture.kind == TextureKind::GammaK && !(texture.nu > 0.0))
    throw InvalidParameter("nu must be > 0");
  for (double eta : eta_grid)
    if (!(eta > 0.0 && eta < 1.0))
      throw InvalidParameter("eta values must lie in (0, 1), got " +
                             std::to_string(eta));
  if (trials < 0) throw InvalidParameter("trials must be >= 0");
}

Mat Scenario::covariance_matrix() const {
  if (covariance.is_toeplitz())
    return build_toeplitz_covariance(std::get<cxd>(covariance.value), N);
  return normalize_trace(std::get<Mat>(covariance.value));
}

Vec Scenario::steering() const { return steering_vector(theta_deg, N); }

}  // namespace anmf
