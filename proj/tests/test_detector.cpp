#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "anmf/clutter.hpp"
#include "anmf/covariance.hpp"
#include "anmf/detector.hpp"
#include "anmf/errors.hpp"
#include "anmf/estimators.hpp"
#include "anmf/rng.hpp"
#include "anmf/theory.hpp"

using namespace anmf;

namespace {

Mat random_pd(int N, std::uint64_t seed) {
  auto eng = substream(seed, 0, StreamRole::Secondary);
  Mat B(N, N);
  for (int j = 0; j < N; ++j) B.col(j) = complex_normal_vector(eng, N);
  Mat A = B * B.adjoint() / static_cast<double>(N);
  A.diagonal().array() += 0.5;
  return A;
}

}  // namespace

TEST_SUITE("detector") {

TEST_CASE("statistic is 1 when the cell equals the steering vector") {
  const int N = 8;
  const Vec p = steering_vector(20.0, N);
  const StatisticValue v = anmf_statistic(random_pd(N, 41), p, p);
  CHECK(v.t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.scaled == doctest::Approx(std::sqrt(double(N))).epsilon(1e-12));
}

TEST_CASE("statistic is 0 for an orthogonal cell under identity weighting") {
  const int N = 4;
  Vec p = Vec::Zero(N), y = Vec::Zero(N);
  p[0] = 1.0 * std::sqrt(double(N));
  y[1] = cxd(0.0, 2.0);
  const StatisticValue v = anmf_statistic(Mat::Identity(N, N), y, p);
  CHECK(v.t == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("statistic ignores positive rescaling of the weighting matrix and the cell") {
  const int N = 6;
  const Mat A = random_pd(N, 42);
  auto eng = substream(42, 1, StreamRole::Primary);
  const Vec y = complex_normal_vector(eng, N);
  const Vec p = steering_vector(15.0, N);
  const double t0 = anmf_statistic(A, y, p).t;
  CHECK(anmf_statistic(3.7 * A, y, p).t == doctest::Approx(t0).epsilon(1e-12));
  CHECK(anmf_statistic(A, 0.02 * y, p).t == doctest::Approx(t0).epsilon(1e-12));
  CHECK(anmf_statistic(0.5 * A, 11.0 * y, p).t == doctest::Approx(t0).epsilon(1e-12));
}

TEST_CASE("statistic always lies in [0, 1]") {
  const int N = 10;
  const Mat A = random_pd(N, 43);
  const Vec p = steering_vector(30.0, N);
  auto eng = substream(43, 1, StreamRole::Primary);
  for (int i = 0; i < 200; ++i) {
    const Vec y = complex_normal_vector(eng, N);
    const StatisticValue v = anmf_statistic(A, y, p);
    CHECK(v.t >= 0.0);
    CHECK(v.t <= 1.0);
    CHECK(v.scaled == doctest::Approx(std::sqrt(double(N)) * v.t));
  }
}

TEST_CASE("singular weighting matrix raises a numerical error") {
  const int N = 4;
  Mat A = Mat::Zero(N, N);
  A(0, 0) = 1.0;  // rank 1
  const Vec p = steering_vector(0.0, N);
  CHECK_THROWS_AS(anmf_statistic(A, p, p), NumericalError);
}

TEST_CASE("known-covariance statistic agrees with direct algebra") {
  const int N = 8;
  const Mat C = build_toeplitz_covariance(cxd(0.0, 0.6), N);
  const Vec p = steering_vector(20.0, N);
  const Vec y = C * p;
  // for y = C p the statistic reduces to |p^* p| / sqrt(p^* C p * p^* C^{-1} p)
  const double num = std::abs((p.adjoint() * p)(0));
  const double den =
      std::sqrt((p.adjoint() * C * p)(0).real() *
                (p.adjoint() * C.llt().solve(p))(0).real());
  const StatisticValue v = nmf_oracle(C, y, p);
  CHECK(v.t == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("known-covariance statistic endpoints under identity covariance") {
  const int N = 4;
  const Vec p = steering_vector(12.0, N);
  CHECK(nmf_oracle(Mat::Identity(N, N), p, p).t ==
        doctest::Approx(1.0).epsilon(1e-13));
  // hand-built orthogonal cell: y^* p = p1 p0 - p0 p1 = 0 exactly
  Vec y = Vec::Zero(N);
  y[0] = std::conj(p[1]);
  y[1] = -std::conj(p[0]);
  CHECK(std::abs((y.adjoint() * p)(0)) < 1e-12);
  CHECK(nmf_oracle(Mat::Identity(N, N), y, p).t ==
        doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("statistic engine reproduces the one-shot computation") {
  const int N = 12;
  const Mat A = random_pd(N, 44);
  const Vec p = steering_vector(25.0, N);
  StatisticEngine engine(A, p);
  CHECK(engine.p_quad() ==
        doctest::Approx((p.adjoint() * A.llt().solve(p))(0).real())
            .epsilon(1e-12));
  auto eng = substream(44, 1, StreamRole::Primary);
  for (int i = 0; i < 50; ++i) {
    const Vec y = complex_normal_vector(eng, N);
    const StatisticValue a = engine.evaluate(y);
    const StatisticValue b = anmf_statistic(A, y, p);
    CHECK(a.t == doctest::Approx(b.t).epsilon(1e-12));
  }
}

TEST_CASE("robust and shrunk statistics converge after the shrinkage remapping") {
  // On Gaussian data the robust-estimator detector at rho matches the
  // shrunk-covariance detector at the remapped shrinkage; the sqrt(N)-scaled
  // gap shrinks as the dimension grows. Loose single-size check here; the
  // acceptance gate measures the decay across sizes.
  const int N = 64, n = 128;
  const Mat C = build_toeplitz_covariance(cxd(0.0, 0.96), N);
  const Mat S = hermitian_sqrt(C);
  const SpectralMeasure sm = spectral_measure(C);
  const Vec p = steering_vector(20.0, N);
  const double c = double(N) / n;
  std::vector<double> gaps;
  for (std::uint64_t trial = 0; trial < 11; ++trial) {
    auto sp = substream(45, trial, StreamRole::Secondary);
    auto tex = substream(45, trial, StreamRole::Texture);
    auto pri = substream(45, trial, StreamRole::Primary);
    const Mat X = generate_secondary(sp, tex, S, TextureModel::one(), n).secondary;
    const Vec y = sample_clutter(pri, S, TextureModel::one());
    const double rho = 0.5;
    const double rho_bar = rho_to_rho_bar(rho, solve_gamma(sm, rho), c);
    const double t_rte = anmf_statistic(rte(X, rho, 1e-11).estimate, y, p).t;
    const double t_rscm = anmf_statistic(rscm(X, rho_bar), y, p).t;
    gaps.push_back(std::sqrt(double(N)) * std::abs(t_rte - t_rscm));
  }
  std::sort(gaps.begin(), gaps.end());
  CHECK(gaps[gaps.size() / 2] < 0.5);
}

}  // TEST_SUITE
