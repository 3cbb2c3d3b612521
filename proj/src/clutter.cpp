#include "anmf/clutter.hpp"

#include <cmath>
#include <string>

namespace anmf {

Vec sample_speckle(std::mt19937_64& eng, int N, SpeckleMode mode) {
  Vec w = complex_normal_vector(eng, N);
  if (mode == SpeckleMode::NormConstrained) {
    const double nrm2 = w.squaredNorm();
    if (nrm2 == 0.0) return sample_speckle(eng, N, mode);  // probability 0
    w *= std::sqrt(static_cast<double>(N) / nrm2);
  }
  return w;
}

RealVec sample_texture(std::mt19937_64& eng, const TextureModel& model,
                       int count) {
  if (count < 0) throw InvalidParameter("sample_texture: count must be >= 0");
  RealVec tau(count);
  if (model.kind == TextureKind::One) {
    tau.setOnes();
    return tau;
  }
  if (!(model.nu > 0.0))
    throw InvalidParameter("sample_texture: texture shape nu must be > 0");
  std::gamma_distribution<double> gamma(model.nu, 1.0 / model.nu);
  for (int i = 0; i < count; ++i) tau[i] = gamma(eng);
  return tau;
}

static SpeckleMode mode_for(const TextureModel& model) {
  return model.kind == TextureKind::One ? SpeckleMode::Gaussian
                                        : SpeckleMode::NormConstrained;
}

ClutterBatch generate_secondary(std::mt19937_64& speckle_eng,
                                std::mt19937_64& texture_eng,
                                const Mat& C_sqrt, const TextureModel& model,
                                int n) {
  if (n < 1) throw InvalidParameter("generate_secondary: n must be >= 1");
  const int N = static_cast<int>(C_sqrt.rows());
  ClutterBatch batch;
  batch.secondary.resize(N, n);
  batch.textures = sample_texture(texture_eng, model, n);
  const SpeckleMode mode = mode_for(model);
  for (int i = 0; i < n; ++i) {
    Vec w = sample_speckle(speckle_eng, N, mode);
    batch.secondary.col(i) = std::sqrt(batch.textures[i]) * (C_sqrt * w);
  }
  return batch;
}

Vec sample_clutter(std::mt19937_64& eng, const Mat& C_sqrt,
                   const TextureModel& model) {
  const int N = static_cast<int>(C_sqrt.rows());
  double tau = 1.0;
  if (model.kind == TextureKind::GammaK) {
    std::gamma_distribution<double> gamma(model.nu, 1.0 / model.nu);
    tau = gamma(eng);
  }
  Vec w = sample_speckle(eng, N, mode_for(model));
  return std::sqrt(tau) * (C_sqrt * w);
}

Vec primary_from_clutter(const Vec& clutter, const Vec& p, double a) {
  if (clutter.size() != p.size())
    throw InvalidParameter("primary_from_clutter: dimension mismatch");
  if (a == 0.0) return clutter;
  return (a / std::sqrt(static_cast<double>(p.size()))) * p + clutter;
}

Vec generate_primary(std::mt19937_64& eng, const Mat& C_sqrt,
                     const TextureModel& model, const Vec& p, double a,
                     Hypothesis hyp) {
  if (a < 0.0) throw InvalidParameter("generate_primary: amplitude a must be >= 0");
  const double nrm2 = p.squaredNorm();
  const double N = static_cast<double>(p.size());
  if (std::abs(nrm2 - N) > 1e-8 * N)
    throw InvalidParameter("generate_primary: steering vector must have ||p||^2 = N");
  Vec x = sample_clutter(eng, C_sqrt, model);
  return primary_from_clutter(x, p, hyp == Hypothesis::H1 ? a : 0.0);
}

}  // namespace anmf
