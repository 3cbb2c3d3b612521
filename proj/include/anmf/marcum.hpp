#pragma once

namespace anmf {

// First-order Marcum Q-function
//   Q1(a, b) = integral_b^inf x exp(-(x^2+a^2)/2) I0(ax) dx,
// the complementary CDF of a Rice(a, 1) variate. Absolute accuracy 1e-10.
// Computed from the canonical Poisson-mixture series
//   Q1(a, b) = sum_k pois(k; a^2/2) P[Poisson(b^2/2) <= k]
// summed outward from the dominant term; for |a - b| >= 14 the bound
// min(Q1, 1-Q1) <= exp(-(a-b)^2/2) ~ 3e-43 pins the value to 0 or 1.
double marcum_q1(double a, double b);

// Asymptotic false-alarm and detection maps for a scaled statistic compared
// against threshold r: Rayleigh tail and Rice tail respectively.
double pfa_theory(double r, double sigma);               // exp(-r^2 / (2 sigma^2))
double pd_theory(double g, double r, double sigma);      // Q1(g, r / sigma)

}  // namespace anmf
