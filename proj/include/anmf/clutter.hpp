#pragma once

#include <random>

#include "anmf/rng.hpp"
#include "anmf/types.hpp"

namespace anmf {

// Gaussian: i.i.d. circular complex normal entries (unit complex variance).
// NormConstrained: the same draw rescaled so the squared norm is exactly N
// (the unitarily-invariant speckle of the compound-Gaussian model).
enum class SpeckleMode { Gaussian, NormConstrained };

Vec sample_speckle(std::mt19937_64& eng, int N, SpeckleMode mode);

// `count` i.i.d. textures: all ones for TextureKind::One, otherwise
// Gamma(shape nu, scale 1/nu) -- unit mean by construction.
RealVec sample_texture(std::mt19937_64& eng, const TextureModel& model,
                       int count);

// Secondary data X (N x n, columns x_i = sqrt(tau_i) * C_sqrt * w_i) plus
// the textures that produced it.
struct ClutterBatch {
  Mat secondary;
  RealVec textures;
};

// Speckle mode follows the texture model: plain Gaussian for One,
// norm-constrained for GammaK. Speckle and textures are drawn from separate
// engines so the two streams stay independent.
ClutterBatch generate_secondary(std::mt19937_64& speckle_eng,
                                std::mt19937_64& texture_eng,
                                const Mat& C_sqrt, const TextureModel& model,
                                int n);

// One clutter vector x = sqrt(tau) * C_sqrt * w under the given texture law.
Vec sample_clutter(std::mt19937_64& eng, const Mat& C_sqrt,
                   const TextureModel& model);

// y = (a/sqrt(N)) p + x. Pass a = 0 for H0. Split out so tests can inject
// a fixed clutter vector and so one clutter draw can serve several
// amplitudes.
Vec primary_from_clutter(const Vec& clutter, const Vec& p, double a);

enum class Hypothesis { H0, H1 };

// Fresh primary draw: H0 -> pure clutter, H1 -> (a/sqrt(N)) p + clutter.
// Requires ||p||^2 = N (steering normalization).
Vec generate_primary(std::mt19937_64& eng, const Mat& C_sqrt,
                     const TextureModel& model, const Vec& p, double a,
                     Hypothesis hyp);

}  // namespace anmf
