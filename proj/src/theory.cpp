#include "anmf/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "anmf/covariance.hpp"
#include "anmf/marcum.hpp"

namespace anmf {

double solve_m(const SpectralMeasure& eigs, double c, double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw InvalidParameter("solve_m: rho must lie in (0, 1]");
  if (!(c >= 0.0)) throw InvalidParameter("solve_m: c must be >= 0");
  const int N = eigs.size();
  const double omr = 1.0 - rho;
  double m = 1.0 / rho;
  for (int it = 0; it < 10000; ++it) {
    double tr = 0.0;
    for (int k = 0; k < N; ++k) {
      const double lam = eigs.eigenvalues[k];
      tr += lam / (1.0 + omr * m * lam);
    }
    tr /= static_cast<double>(N);
    const double next = 1.0 / (rho + c * omr * tr);
    const double delta = std::abs(next - m);
    m = next;
    if (delta <= 1e-12) return m;
  }
  throw NumericalError("solve_m: fixed point did not converge in 1e4 iterations");
}

double solve_gamma(const SpectralMeasure& eigs, double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw InvalidParameter("solve_gamma: rho must lie in (0, 1]");
  const int N = eigs.size();
  const double omr = 1.0 - rho;
  const auto h = [&](double gamma) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
      const double lam = eigs.eigenvalues[k];
      s += lam / (gamma * rho + omr * lam);
    }
    return s / static_cast<double>(N) - 1.0;
  };
  const double mean_lam = eigs.eigenvalues.sum() / static_cast<double>(N);
  // h(gamma) < mean_lam / (gamma rho) - 1, so any gamma > mean_lam / rho
  // makes h negative; h increases without bound as gamma -> 0 when the
  // spectrum is nondegenerate
  double lo = 1e-300;
  double hi = mean_lam / rho + 1.0;
  if (!(h(hi) < 0.0) || !(h(lo) > 0.0))
    throw NumericalError("solve_gamma: bisection bracket failure");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double rho_to_rho_bar(double rho, double gamma, double c) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw InvalidParameter("rho_to_rho_bar: rho must lie in (0, 1]");
  if (!(gamma > 0.0)) throw InvalidParameter("rho_to_rho_bar: gamma must be > 0");
  if (!((1.0 - rho) * c < 1.0))
    throw InvalidParameter("rho_to_rho_bar: requires (1 - rho) c < 1 "
                           "(rho above the existence boundary)");
  return rho / (rho + (1.0 / gamma) * (1.0 - rho) / (1.0 - (1.0 - rho) * c));
}

namespace {

// Rotated-steering weights |(U^* p)_k|^2: every quadratic form in the theory
// expressions becomes a scalar sum over the spectrum.
RealVec rotated_weights(const SpectralMeasure& eigs, const Vec& p) {
  if (p.size() != eigs.size())
    throw InvalidParameter("theory: steering vector and spectrum sizes differ");
  const Vec pt = eigs.eigenvectors.adjoint() * p;
  return pt.cwiseAbs2();
}

// Core evaluation of the shrinkage-path formulas at effective
// regularization rho_eff; used by both paths (the robust one feeds rho_bar).
void fill_scm_body(TheoryReport& rep, const SpectralMeasure& eigs,
                   const RealVec& w, double c, double rho_eff, double a) {
  const int N = eigs.size();
  const double omr = 1.0 - rho_eff;
  const double m = solve_m(eigs, c, rho_eff);

  double pQp = 0.0, pCQ2p = 0.0, trCQ = 0.0, trC2Q2 = 0.0;
  for (int k = 0; k < N; ++k) {
    const double lam = eigs.eigenvalues[k];
    const double q = 1.0 / (1.0 + omr * m * lam);
    pQp += w[k] * q;
    pCQ2p += w[k] * lam * q * q;
    trCQ += lam * q;
    trC2Q2 += lam * lam * q * q;
  }
  trCQ /= static_cast<double>(N);
  trC2Q2 /= static_cast<double>(N);

  const double D = 1.0 - c * omr * omr * m * m * trC2Q2;
  if (!(D > 0.0))
    throw NumericalError("theory: variance denominator 1 - c(1-rho)^2 m^2 "
                         "(1/N)tr C^2 Q^2 is not positive at rho = " +
                         std::to_string(rho_eff));
  rep.m = m;
  rep.sigma2 = 0.5 * pCQ2p / (pQp * trCQ) / D;
  rep.f = D * pQp * pQp / (static_cast<double>(N) * pCQ2p);
  rep.a = a;
  rep.g = a * std::sqrt(2.0 * rep.f);
}

}  // namespace

TheoryReport theory_scm(const SpectralMeasure& C_eigs, const Vec& p, double c,
                        double rho, double a) {
  TheoryReport rep;
  rep.rho = rho;
  rep.rho_bar = rho;
  rep.gamma = std::numeric_limits<double>::quiet_NaN();
  fill_scm_body(rep, C_eigs, rotated_weights(C_eigs, p), c, rho, a);
  return rep;
}

TheoryReport theory_scm(const Mat& C, const Vec& p, double c, double rho,
                        double a) {
  return theory_scm(spectral_measure(C), p, c, rho, a);
}

TheoryReport theory_rte(const SpectralMeasure& C_eigs, const Vec& p, double c,
                        double rho, double a, const TextureModel& texture) {
  TheoryReport rep;
  rep.rho = rho;
  rep.gamma = solve_gamma(C_eigs, rho);
  rep.rho_bar = rho_to_rho_bar(rho, rep.gamma, c);
  fill_scm_body(rep, C_eigs, rotated_weights(C_eigs, p), c, rep.rho_bar, a);
  if (texture.kind == TextureKind::GammaK) {
    QuadratureRule rule = gamma_expectation_rule(texture.nu);
    rep.tau_nodes = rule.nodes;
    rep.tau_weights = rule.weights;
  }
  return rep;
}

TheoryReport theory_rte(const Mat& C, const Vec& p, double c, double rho,
                        double a, const TextureModel& texture) {
  return theory_rte(spectral_measure(C), p, c, rho, a, texture);
}

double TheoryReport::pfa(double r) const {
  return pfa_theory(r, std::sqrt(sigma2));
}

double TheoryReport::pd(double r) const {
  const double sigma = std::sqrt(sigma2);
  if (tau_nodes.size() == 0) return pd_theory(g, r, sigma);
  // E_tau[ Q1(g / sqrt(tau), r / sigma) ]
  double acc = 0.0;
  for (int i = 0; i < tau_nodes.size(); ++i)
    acc += tau_weights[i] * pd_theory(g / std::sqrt(tau_nodes[i]), r, sigma);
  return acc;
}

}  // namespace anmf
