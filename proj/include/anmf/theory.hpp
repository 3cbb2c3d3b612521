#pragma once

#include "anmf/quadrature.hpp"
#include "anmf/types.hpp"

namespace anmf {

// Asymptotic (large N, n at fixed N/n) characterization of the scaled
// detection statistic for one (rho, scenario) pair: Rayleigh under H0 with
// scale sigma, Rice under H1 with noncentrality g (mixed over the texture
// law for the robust-estimator path).
struct TheoryReport {
  double rho = 0.0;      // requested regularization
  double rho_bar = 0.0;  // remapped value driving the formulas (= rho on the shrinkage path)
  double m = 0.0;        // resolvent fixed point m(-rho_bar)
  double gamma = 0.0;    // trace-equation solution (robust path only; NaN otherwise)
  double sigma2 = 0.0;   // squared Rayleigh scale of sqrt(N) * t under H0
  double g = 0.0;        // Rice noncentrality at tau = 1; g = a * sqrt(2 f)
  double f = 0.0;        // amplitude-free detection objective, f = g^2 / (2 a^2)
  double a = 0.0;        // amplitude the report was built for

  // texture-expectation rule (empty = point mass at tau = 1)
  RealVec tau_nodes, tau_weights;

  double pfa(double r) const;  // P[sqrt(N) t > r | H0]
  double pd(double r) const;   // P[sqrt(N) t > r | H1]
};

// Positive solution of
//   m = 1 / (rho + c (1-rho) (1/N) sum_k lambda_k / (1 + (1-rho) m lambda_k))
// by fixed-point iteration from m = 1/rho (|dm| <= 1e-12, <= 1e4 iterations).
double solve_m(const SpectralMeasure& eigs, double c, double rho);

// Unique gamma > 0 with (1/N) sum_k lambda_k / (gamma rho + (1-rho) lambda_k) = 1,
// by bisection (the left side is strictly decreasing in gamma).
double solve_gamma(const SpectralMeasure& eigs, double rho);

// The regularization remapping that matches the robust estimator to the
// shrinkage one: rho_bar = rho / (rho + (1/gamma) (1-rho) / (1 - (1-rho) c)).
// Requires (1-rho) c < 1.
double rho_to_rho_bar(double rho, double gamma, double c);

// Shrinkage-estimator (Gaussian-clutter) theory at regularization rho.
TheoryReport theory_scm(const SpectralMeasure& C_eigs, const Vec& p, double c,
                        double rho, double a);
TheoryReport theory_scm(const Mat& C, const Vec& p, double c, double rho,
                        double a);

// Robust-estimator theory: computes gamma and rho_bar, evaluates the
// shrinkage formulas at rho_bar, and mixes the detection probability over
// the texture law (fixed-node Gauss-Laguerre for GammaK, exact for One).
TheoryReport theory_rte(const SpectralMeasure& C_eigs, const Vec& p, double c,
                        double rho, double a, const TextureModel& texture);
TheoryReport theory_rte(const Mat& C, const Vec& p, double c, double rho,
                        double a, const TextureModel& texture);

}  // namespace anmf
