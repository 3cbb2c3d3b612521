#include <cmath>
#include <complex>

#include "doctest.h"

#include "anmf/clutter.hpp"
#include "anmf/covariance.hpp"
#include "anmf/errors.hpp"
#include "anmf/estimators.hpp"
#include "anmf/rng.hpp"

using namespace anmf;

TEST_SUITE("rng_clutter") {

TEST_CASE("substreams are deterministic functions of (seed, trial, role)") {
  auto e1 = substream(12345, 7, StreamRole::Secondary);
  auto e2 = substream(12345, 7, StreamRole::Secondary);
  for (int i = 0; i < 16; ++i) CHECK(e1() == e2());
}

TEST_CASE("substreams with different keys produce different output") {
  auto base = substream(12345, 7, StreamRole::Secondary);
  auto other_trial = substream(12345, 8, StreamRole::Secondary);
  auto other_role = substream(12345, 7, StreamRole::Texture);
  auto other_seed = substream(12346, 7, StreamRole::Secondary);
  CHECK(base() != other_trial());
  base.discard(1);
  other_role.discard(2);
  // compare a later word too, to avoid coincidental first-word matches
  CHECK(substream(12345, 7, StreamRole::Secondary)() != other_role());
  CHECK(substream(12345, 7, StreamRole::Secondary)() != other_seed());
}

TEST_CASE("uniform01 stays inside (0, 1]") {
  auto eng = substream(1, 0, StreamRole::Primary);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(eng);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("standard normal pairs have the right first two moments") {
  auto eng = substream(2, 0, StreamRole::Primary);
  const int M = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < M / 2; ++i) {
    double z0, z1;
    standard_normal_pair(eng, z0, z1);
    sum += z0 + z1;
    sum2 += z0 * z0 + z1 * z1;
  }
  const double mean = sum / M;
  const double var = sum2 / M - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("complex normal entries have unit complex variance") {
  auto eng = substream(3, 0, StreamRole::Primary);
  const int M = 100000, N = 8;
  double sum = 0.0;
  for (int i = 0; i < M; ++i)
    sum += complex_normal_vector(eng, N).squaredNorm() / N;
  CHECK(sum / M > 0.99);
  CHECK(sum / M < 1.01);
}

TEST_CASE("norm-constrained speckle has squared norm exactly N") {
  auto eng = substream(4, 0, StreamRole::Secondary);
  for (int i = 0; i < 100; ++i) {
    const Vec w = sample_speckle(eng, 12, SpeckleMode::NormConstrained);
    CHECK(w.squaredNorm() == doctest::Approx(12.0).epsilon(1e-14));
  }
}

TEST_CASE("gaussian speckle norm concentrates around N") {
  auto eng = substream(5, 0, StreamRole::Secondary);
  const int M = 100000, N = 8;
  double sum = 0.0;
  for (int i = 0; i < M; ++i)
    sum += sample_speckle(eng, N, SpeckleMode::Gaussian).squaredNorm() / N;
  CHECK(sum / M > 0.99);
  CHECK(sum / M < 1.01);
}

TEST_CASE("identical seeds give identical speckle draws") {
  auto e1 = substream(6, 3, StreamRole::Secondary);
  auto e2 = substream(6, 3, StreamRole::Secondary);
  const Vec a = sample_speckle(e1, 16, SpeckleMode::Gaussian);
  const Vec b = sample_speckle(e2, 16, SpeckleMode::Gaussian);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("texture One is identically 1") {
  auto eng = substream(7, 0, StreamRole::Texture);
  const RealVec tau = sample_texture(eng, TextureModel::one(), 5);
  REQUIRE(tau.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(tau[i] == 1.0);
}

TEST_CASE("gamma texture has unit mean and variance 1/nu") {
  auto eng = substream(8, 0, StreamRole::Texture);
  const int M = 1000000;
  const RealVec tau = sample_texture(eng, TextureModel::gamma_k(0.5), M);
  const double mean = tau.mean();
  const double var = (tau.array() - mean).square().sum() / (M - 1);
  CHECK(mean > 0.99);
  CHECK(mean < 1.01);
  CHECK(var == doctest::Approx(2.0).epsilon(0.05));
  CHECK(tau.minCoeff() > 0.0);
}

TEST_CASE("gamma texture with huge shape concentrates at 1") {
  auto eng = substream(9, 0, StreamRole::Texture);
  const int M = 20000;
  const RealVec tau = sample_texture(eng, TextureModel::gamma_k(1e6), M);
  const double mean = tau.mean();
  const double var = (tau.array() - mean).square().sum() / (M - 1);
  CHECK(var < 1e-5);
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("texture shape must be positive") {
  CHECK_THROWS_AS(TextureModel::gamma_k(0.0), InvalidParameter);
  CHECK_THROWS_AS(TextureModel::gamma_k(-1.0), InvalidParameter);
}

TEST_CASE("secondary data with identity mixing reproduces the raw speckle") {
  auto sp1 = substream(10, 0, StreamRole::Secondary);
  auto tex = substream(10, 0, StreamRole::Texture);
  const Mat I = Mat::Identity(6, 6);
  const ClutterBatch batch = generate_secondary(sp1, tex, I, TextureModel::one(), 5);
  REQUIRE(batch.secondary.cols() == 5);
  REQUIRE(batch.textures.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(batch.textures[i] == 1.0);

  auto sp2 = substream(10, 0, StreamRole::Secondary);
  for (int i = 0; i < 5; ++i) {
    const Vec w = sample_speckle(sp2, 6, SpeckleMode::Gaussian);
    CHECK((batch.secondary.col(i) - w).norm() == 0.0);
  }
}

TEST_CASE("sample covariance of many gaussian draws approaches the mixing matrix") {
  const Mat C = build_toeplitz_covariance(cxd(0.5, 0.0), 4);
  const Mat S = hermitian_sqrt(C);
  auto sp = substream(11, 0, StreamRole::Secondary);
  auto tex = substream(11, 0, StreamRole::Texture);
  const ClutterBatch batch = generate_secondary(sp, tex, S, TextureModel::one(), 10000);
  const Mat R = scm(batch.secondary);
  CHECK((R - C).norm() <= 0.05 * C.norm());
}

TEST_CASE("heavy-tailed texture produces heavier column-norm tails than gaussian") {
  const int N = 8, n = 20000;
  const Mat I = Mat::Identity(N, N);
  auto kurtosis = [](const RealVec& v) {
    const double mean = v.mean();
    const double var = (v.array() - mean).square().sum() / v.size();
    const double m4 = (v.array() - mean).pow(4).sum() / v.size();
    return m4 / (var * var);
  };
  auto sp1 = substream(12, 0, StreamRole::Secondary);
  auto tex1 = substream(12, 0, StreamRole::Texture);
  const ClutterBatch gauss = generate_secondary(sp1, tex1, I, TextureModel::one(), n);
  auto sp2 = substream(12, 1, StreamRole::Secondary);
  auto tex2 = substream(12, 1, StreamRole::Texture);
  const ClutterBatch heavy =
      generate_secondary(sp2, tex2, I, TextureModel::gamma_k(0.5), n);
  RealVec norms_g(n), norms_k(n);
  for (int i = 0; i < n; ++i) {
    norms_g[i] = gauss.secondary.col(i).norm();
    norms_k[i] = heavy.secondary.col(i).norm();
  }
  CHECK(kurtosis(norms_k) > kurtosis(norms_g));
}

TEST_CASE("zero amplitude adds nothing to the clutter") {
  const Vec p = steering_vector(20.0, 8);
  Vec x(8);
  x.setConstant(cxd(0.3, -0.2));
  CHECK((primary_from_clutter(x, p, 0.0) - x).norm() == 0.0);
}

TEST_CASE("target-present draw with zero clutter is the scaled steering vector") {
  const int N = 16;
  const Vec p = steering_vector(20.0, N);
  const Vec zero = Vec::Zero(N);
  const double a = 0.9;
  const Vec y = primary_from_clutter(zero, p, a);
  CHECK((y - (a / std::sqrt(double(N))) * p).norm() < 1e-15);
}

TEST_CASE("generate_primary H0 and H1 differ exactly by the target component") {
  const int N = 8;
  const Mat I = Mat::Identity(N, N);
  const Vec p = steering_vector(10.0, N);
  auto e1 = substream(13, 0, StreamRole::Primary);
  auto e2 = substream(13, 0, StreamRole::Primary);
  const Vec y0 = generate_primary(e1, I, TextureModel::one(), p, 0.9, Hypothesis::H0);
  const Vec y1 = generate_primary(e2, I, TextureModel::one(), p, 0.9, Hypothesis::H1);
  CHECK((y1 - y0 - (0.9 / std::sqrt(double(N))) * p).norm() < 1e-14);
}

TEST_CASE("generate_primary sample mean converges to the target component") {
  const int N = 4, M = 10000;
  const Mat I = Mat::Identity(N, N);
  const Vec p = steering_vector(20.0, N);
  const double a = 0.9;
  auto eng = substream(14, 0, StreamRole::Primary);
  Vec mean = Vec::Zero(N);
  for (int i = 0; i < M; ++i)
    mean += generate_primary(eng, I, TextureModel::one(), p, a, Hypothesis::H1);
  mean /= static_cast<double>(M);
  const Vec target = (a / std::sqrt(double(N))) * p;
  // each complex entry has std 1/sqrt(M) about its mean; allow 5 sigma
  for (int k = 0; k < N; ++k) CHECK(std::abs(mean[k] - target[k]) < 0.05);
}

TEST_CASE("generate_primary rejects unnormalized steering vectors") {
  const int N = 8;
  const Mat I = Mat::Identity(N, N);
  Vec p = steering_vector(0.0, N);
  p *= 2.0;
  auto eng = substream(15, 0, StreamRole::Primary);
  CHECK_THROWS_AS(
      generate_primary(eng, I, TextureModel::one(), p, 0.5, Hypothesis::H1),
      InvalidParameter);
}

}  // TEST_SUITE
