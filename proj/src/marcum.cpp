#include "anmf/marcum.hpp"

#include <algorithm>
#include <cmath>

#include "anmf/errors.hpp"

namespace anmf {

namespace {

double log_poisson_pmf(long k, double lambda) {
  return -lambda + static_cast<double>(k) * std::log(lambda) -
         std::lgamma(static_cast<double>(k) + 1.0);
}

// P[Poisson(lambda) <= k], summed outward from the mode so it stays accurate
// when exp(-lambda) underflows.
double poisson_cdf(long k, double lambda) {
  if (k < 0) return 0.0;
  const long m1 = std::min(k, static_cast<long>(lambda));
  const double t1 = std::exp(log_poisson_pmf(m1, lambda));
  double sum = t1;
  double t = t1;
  for (long m = m1; m >= 1; --m) {  // terms decrease monotonically downward
    t *= static_cast<double>(m) / lambda;
    sum += t;
    if (t < sum * 1e-18) break;
  }
  t = t1;
  for (long m = m1 + 1; m <= k; ++m) {
    t *= lambda / static_cast<double>(m);
    sum += t;
    if (t < sum * 1e-18) break;
  }
  return std::min(sum, 1.0);
}

}  // namespace

double marcum_q1(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0))
    throw InvalidParameter("marcum_q1: arguments must be >= 0");
  if (b == 0.0) return 1.0;
  const double beta = 0.5 * b * b;
  if (a == 0.0) return std::exp(-beta);
  // min(Q1, 1-Q1) <= exp(-(a-b)^2/2): ~3e-43 at |a-b| = 14
  if (b - a >= 14.0) return 0.0;
  if (a - b >= 14.0) return 1.0;

  const double alpha = 0.5 * a * a;
  const long k0 = static_cast<long>(alpha);  // dominant Poisson(alpha) index

  // S = sum_k pois(k; alpha) * P[Poisson(beta) <= k], outward from k0.
  const double t_alpha0 = std::exp(log_poisson_pmf(k0, alpha));
  const double t_beta0 = std::exp(log_poisson_pmf(k0, beta));
  const double F0 = poisson_cdf(k0, beta);

  double S = t_alpha0 * F0;
  double mass = t_alpha0;  // consumed Poisson(alpha) probability

  // downward: F(k-1) = F(k) - pois(k; beta)
  {
    double ta = t_alpha0, tb = t_beta0, F = F0;
    for (long k = k0; k >= 1; --k) {
      F = std::max(F - tb, 0.0);
      ta *= static_cast<double>(k) / alpha;
      tb *= static_cast<double>(k) / beta;
      S += ta * F;
      mass += ta;
      if (F < 1e-17 || ta < 1e-18) break;  // lower terms only shrink
    }
  }
  // upward: F(k+1) = F(k) + pois(k+1; beta); remaining contribution is
  // bounded by the unconsumed alpha mass since F <= 1
  {
    double ta = t_alpha0, tb = t_beta0, F = F0;
    for (long k = k0 + 1; mass < 1.0 - 1e-14; ++k) {
      ta *= alpha / static_cast<double>(k);
      tb *= beta / static_cast<double>(k);
      F = std::min(F + tb, 1.0);
      S += ta * F;
      mass += ta;
      // past the mode the terms decay geometrically; the remaining tail is
      // below ta * (k+1) / (k+1-alpha), safely under the accuracy target
      if (ta < 1e-18 && static_cast<double>(k) > alpha + 1.0) break;
    }
  }
  return std::clamp(S, 0.0, 1.0);
}

double pfa_theory(double r, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("pfa_theory: sigma must be > 0");
  if (!(r >= 0.0)) throw InvalidParameter("pfa_theory: r must be >= 0");
  return std::exp(-r * r / (2.0 * sigma * sigma));
}

double pd_theory(double g, double r, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("pd_theory: sigma must be > 0");
  if (!(g >= 0.0)) throw InvalidParameter("pd_theory: g must be >= 0");
  if (!(r >= 0.0)) throw InvalidParameter("pd_theory: r must be >= 0");
  return marcum_q1(g, r / sigma);
}

}  // namespace anmf
