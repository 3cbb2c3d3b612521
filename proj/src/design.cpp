#include "anmf/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "anmf/covariance.hpp"
#include "anmf/errors.hpp"

namespace anmf {

namespace {

// All plug-in expressions are stated for rho < 1 and extended to rho = 1 by
// their one-sided limit, which we take numerically just inside the endpoint.
constexpr double kEndpointGap = 1e-6;

double effective_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw InvalidParameter("design: rho must lie in (0, 1], got " +
                           std::to_string(rho));
  return std::min(rho, 1.0 - kEndpointGap);
}

}  // namespace

RhoInterval design_interval_scm(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw InvalidParameter("design: kappa must lie in (0, 1), got " +
                           std::to_string(kappa));
  return {kappa, 1.0};
}

RhoInterval design_interval_rte(double c_N, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw InvalidParameter("design: kappa must lie in (0, 1), got " +
                           std::to_string(kappa));
  if (!(c_N > 0.0))
    throw InvalidParameter("design: c_N must be positive, got " +
                           std::to_string(c_N));
  const double lo = kappa + std::max(0.0, 1.0 - 1.0 / c_N);
  if (lo > 1.0)
    throw InvalidParameter(
        "design: empty shrinkage interval; kappa + max(0, 1 - n/N) = " +
        std::to_string(lo) + " exceeds 1");
  return {lo, 1.0};
}

// ---------------------------------------------------------------------------
// ScmDesign
// ---------------------------------------------------------------------------

ScmDesign::ScmDesign(const Mat& X, const Vec& p) {
  if (p.size() != X.rows())
    throw InvalidParameter("design: steering vector length must match data rows");
  const Mat R = scm(X);
  SpectralMeasure sm = spectral_measure(R);
  lam_ = sm.eigenvalues.cwiseMax(0.0);  // clip eigensolver roundoff
  U_ = std::move(sm.eigenvectors);
  p_rot_ = U_.adjoint() * p;
  w_ = p_rot_.cwiseAbs2();
  c_ = static_cast<double>(X.rows()) / static_cast<double>(X.cols());
}

ScmDesign::Sums ScmDesign::sums(double rho) const {
  const double re = effective_rho(rho);
  const int N_ = N();
  Sums s{0.0, 0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < N_; ++k) {
    const double d = (1.0 - re) * lam_[k] + re;
    s.a1 += w_[k] / d;
    s.a2l += w_[k] * lam_[k] / (d * d);
    s.t1 += 1.0 / d;
    s.t1l += lam_[k] / d;
  }
  s.t1 /= static_cast<double>(N_);
  s.t1l /= static_cast<double>(N_);
  s.corr = 1.0 - c_ + c_ * re * s.t1;
  return s;
}

double ScmDesign::sigma2_hat(double rho) const {
  const Sums s = sums(rho);
  if (!(s.a1 > 0.0 && s.t1l > 0.0 && s.corr > 0.0))
    throw NumericalError("sigma2_hat_scm: degenerate spectrum at rho = " +
                         std::to_string(rho));
  return 0.5 * (s.a2l / s.a1) / (s.corr * s.t1l);
}

double ScmDesign::f_hat(double rho) const {
  const Sums s = sums(rho);
  if (!(s.a2l > 0.0 && s.corr > 0.0))
    throw NumericalError("f_hat_scm: degenerate spectrum at rho = " +
                         std::to_string(rho));
  return (s.a1 * s.a1) * (s.corr * s.corr) / (s.a2l * static_cast<double>(N()));
}

double ScmDesign::statistic(double rho, const Vec& y) const {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw InvalidParameter("statistic: rho must lie in [0, 1], got " +
                           std::to_string(rho));
  const int N_ = N();
  if (y.size() != N_)
    throw InvalidParameter("statistic: cell length must match data rows");
  const Vec yr = U_.adjoint() * y;
  double pq = 0.0, yq = 0.0;
  cxd cross(0.0, 0.0);
  for (int k = 0; k < N_; ++k) {
    const double d = (1.0 - rho) * lam_[k] + rho;
    if (!(d > 0.0))
      throw NumericalError("statistic: shrunk sample covariance is singular");
    pq += w_[k] / d;
    yq += std::norm(yr[k]) / d;
    cross += std::conj(yr[k]) * p_rot_[k] / d;
  }
  if (!(pq > 0.0 && yq > 0.0))
    throw NumericalError("statistic: nonpositive quadratic form");
  return std::min(std::abs(cross) / std::sqrt(yq * pq), 1.0);
}

// ---------------------------------------------------------------------------
// RteDesign
// ---------------------------------------------------------------------------

RteDesign::RteDesign(const Mat& X, const Vec& p, double scan_tol, int max_iter)
    : solver_(X), p_(p), scan_tol_(scan_tol), max_iter_(max_iter) {
  if (p_.size() != X.rows())
    throw InvalidParameter("design: steering vector length must match data rows");
  c_ = static_cast<double>(X.rows()) / static_cast<double>(X.cols());
}

void RteDesign::ensure_solved(double rho) {
  if (solved_rho_ == rho) return;
  solver_.solve(rho, scan_tol_, max_iter_, /*warm=*/true);
  solved_rho_ = rho;
  stat_ready_ = false;
}

void RteDesign::solve_final(double rho, double tol) {
  solver_.solve(rho, tol, max_iter_, /*warm=*/true);
  solved_rho_ = rho;
  stat_ready_ = false;
}

double RteDesign::sigma2_hat(double rho) {
  ensure_solved(rho);
  const double re = effective_rho(rho);
  const Vec u = solver_.solve_inverse(p_);
  const double pu = std::real(p_.dot(u));
  const double wq = solver_.weighted_quad(u);
  const double corr = 1.0 - c_ + c_ * re;
  if (!(pu > 0.0 && wq > 0.0 && corr > 0.0))
    throw NumericalError("sigma2_hat_rte: degenerate quadratic form at rho = " +
                         std::to_string(rho));
  // cancelled form of (1/2) (1 - rho p*C^-2 p / p*C^-1 p) / ((1-c+c rho)(1-rho))
  return 0.5 * wq / (pu * corr);
}

double RteDesign::f_hat(double rho) {
  ensure_solved(rho);
  const double re = effective_rho(rho);
  const double N_ = static_cast<double>(N());
  const Vec u = solver_.solve_inverse(p_);
  const double pu = std::real(p_.dot(u));
  const double wq = solver_.weighted_quad(u);
  const double wt = solver_.weighted_trace();
  const double corr = 1.0 - c_ + c_ * re;
  if (!(pu > 0.0 && wq > 0.0 && corr > 0.0))
    throw NumericalError("f_hat_rte: degenerate quadratic form at rho = " +
                         std::to_string(rho));
  return pu * pu * wt * corr * corr / (wq * N_ * N_);
}

double RteDesign::statistic(const Vec& y) {
  if (solved_rho_ < 0.0)
    throw InvalidParameter("statistic: no shrinkage value has been solved yet");
  if (y.size() != p_.size())
    throw InvalidParameter("statistic: cell length must match data rows");
  if (!stat_ready_) {
    u_ = solver_.solve_inverse(p_);
    pq_ = std::real(p_.dot(u_));
    if (!(pq_ > 0.0))
      throw NumericalError("statistic: nonpositive steering quadratic form");
    stat_ready_ = true;
  }
  const Vec w = solver_.solve_inverse(y);
  const double yq = std::real(y.dot(w));
  if (!(yq > 0.0)) throw NumericalError("statistic: nonpositive quadratic form");
  return std::min(std::abs(y.dot(u_)) / std::sqrt(yq * pq_), 1.0);
}

// ---------------------------------------------------------------------------
// One-shot plug-in evaluations
// ---------------------------------------------------------------------------

double sigma2_hat_scm(const Mat& X, const Vec& p, double rho) {
  return ScmDesign(X, p).sigma2_hat(rho);
}

double f_hat_scm(const Mat& X, const Vec& p, double rho) {
  return ScmDesign(X, p).f_hat(rho);
}

namespace {

struct RteForms {
  double pu;   // p* C^-1 p
  double pu2;  // p* C^-2 p
  double tr;   // tr C / N
};

RteForms rte_forms(const Mat& C_hat, const Vec& p) {
  if (C_hat.rows() != C_hat.cols() || C_hat.rows() != p.size())
    throw InvalidParameter("design: estimate and steering dimensions disagree");
  Eigen::LLT<Mat> llt(C_hat);
  if (llt.info() != Eigen::Success)
    throw NumericalError("design: estimate is not positive definite");
  const Vec u = llt.solve(p);
  RteForms f;
  f.pu = std::real(p.dot(u));
  f.pu2 = u.squaredNorm();
  f.tr = C_hat.trace().real() / static_cast<double>(p.size());
  if (!(f.pu > 0.0))
    throw NumericalError("design: nonpositive steering quadratic form");
  return f;
}

double check_cn(double c_N) {
  if (!(c_N > 0.0))
    throw InvalidParameter("design: c_N must be positive, got " +
                           std::to_string(c_N));
  return c_N;
}

}  // namespace

double sigma2_hat_rte(const Mat& C_hat, const Vec& p, double rho, double c_N) {
  const double re = effective_rho(rho);
  check_cn(c_N);
  const RteForms fo = rte_forms(C_hat, p);
  const double num = 1.0 - re * fo.pu2 / fo.pu;
  const double den = (1.0 - c_N + c_N * re) * (1.0 - re);
  if (!(num > 0.0 && den > 0.0))
    throw NumericalError("sigma2_hat_rte: expression not positive at rho = " +
                         std::to_string(rho));
  return 0.5 * num / den;
}

double f_hat_rte(const Mat& C_hat, const Vec& p, double rho, double c_N) {
  const double re = effective_rho(rho);
  check_cn(c_N);
  const RteForms fo = rte_forms(C_hat, p);
  const double corr = 1.0 - c_N + c_N * re;
  const double den = fo.pu - re * fo.pu2;
  if (!(den > 0.0 && corr > 0.0 && fo.tr - re > 0.0))
    throw NumericalError("f_hat_rte: expression not positive at rho = " +
                         std::to_string(rho));
  return fo.pu * fo.pu * (fo.tr - re) * corr * corr /
         (den * static_cast<double>(p.size()));
}

// ---------------------------------------------------------------------------
// Shrinkage search
// ---------------------------------------------------------------------------

namespace {

double safe_eval(const std::function<double(double)>& objective, double x,
                 OptimizeReport& rep) {
  ++rep.evaluations;
  try {
    const double v = objective(x);
    if (std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  ++rep.failures;
  return -std::numeric_limits<double>::infinity();
}

}  // namespace

OptimizeReport optimize_rho_detailed(
    const std::function<double(double)>& objective, double lo, double hi,
    double grid_step, double refine_xtol) {
  if (!(lo <= hi))
    throw InvalidParameter("optimize_rho: interval is empty (" +
                           std::to_string(lo) + " > " + std::to_string(hi) + ")");
  if (!(grid_step > 0.0))
    throw InvalidParameter("optimize_rho: grid_step must be positive");

  std::vector<double> grid;
  const int steps = static_cast<int>(std::floor((hi - lo) / grid_step + 1e-9));
  for (int i = 0; i <= steps; ++i) grid.push_back(std::min(lo + i * grid_step, hi));
  if (grid.back() < hi - 1e-12) grid.push_back(hi);

  OptimizeReport rep;
  double best_x = 0.0;
  double best_v = -std::numeric_limits<double>::infinity();
  int best_idx = -1;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double v = safe_eval(objective, grid[i], rep);
    if (std::isfinite(v)) rep.curve.emplace_back(grid[i], v);
    if (v > best_v) {  // strict: ties resolve toward the smallest rho
      best_v = v;
      best_x = grid[i];
      best_idx = static_cast<int>(i);
    }
  }
  if (best_idx < 0)
    throw NumericalError("optimize_rho: objective failed at every grid point");

  // Golden-section refinement inside the bracket around the best grid point.
  double a = grid[static_cast<size_t>(std::max(best_idx - 1, 0))];
  double b = grid[std::min(static_cast<size_t>(best_idx) + 1, grid.size() - 1)];
  constexpr double invphi = 0.6180339887498949;
  if (b - a > refine_xtol) {
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = safe_eval(objective, x1, rep);
    double f2 = safe_eval(objective, x2, rep);
    auto consider = [&](double x, double v) {
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    };
    consider(x1, f1);
    consider(x2, f2);
    while (b - a > refine_xtol) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = safe_eval(objective, x2, rep);
        consider(x2, f2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = safe_eval(objective, x1, rep);
        consider(x1, f1);
      }
    }
  }
  rep.rho_star = best_x;
  rep.objective_at_star = best_v;
  return rep;
}

double optimize_rho(const std::function<double(double)>& objective, double lo,
                    double hi, double grid_step) {
  return optimize_rho_detailed(objective, lo, hi, grid_step).rho_star;
}

double set_threshold(double sigma_hat, double eta) {
  if (!(eta > 0.0 && eta < 1.0))
    throw InvalidParameter("set_threshold: eta must lie in (0, 1), got " +
                           std::to_string(eta));
  if (!(sigma_hat > 0.0))
    throw InvalidParameter("set_threshold: sigma_hat must be positive, got " +
                           std::to_string(sigma_hat));
  return sigma_hat * std::sqrt(-2.0 * std::log(eta));
}

// ---------------------------------------------------------------------------
// End-to-end design
// ---------------------------------------------------------------------------

namespace {

void finish(DesignOutput& out, double sigma2, double eta, int N,
            OptimizeReport&& rep, bool keep_curve) {
  if (!(sigma2 > 0.0))
    throw NumericalError("design: predicted H0 scale is not positive");
  out.rho_star = rep.rho_star;
  out.objective_at_star = rep.objective_at_star;
  out.sigma_hat = std::sqrt(sigma2);
  out.r_hat = set_threshold(out.sigma_hat, eta);
  out.gamma_threshold = out.r_hat / std::sqrt(static_cast<double>(N));
  if (keep_curve) out.objective_curve = std::move(rep.curve);
}

}  // namespace

DesignOutput design_scm(const Mat& X, const Vec& p, double eta,
                        const DesignOptions& opts) {
  ScmDesign ctx(X, p);
  const RhoInterval iv = design_interval_scm(opts.kappa);
  OptimizeReport rep = optimize_rho_detailed(
      [&](double r) { return ctx.f_hat(r); }, iv.lo, iv.hi, opts.grid_step,
      opts.refine_xtol);
  DesignOutput out;
  finish(out, ctx.sigma2_hat(rep.rho_star), eta, ctx.N(), std::move(rep),
         opts.keep_curve);
  return out;
}

DesignOutput design_rte(const Mat& X, const Vec& p, double eta,
                        const DesignOptions& opts) {
  RteDesign ctx(X, p, opts.scan_tol, opts.max_iter);
  const RhoInterval iv = design_interval_rte(ctx.c_N(), opts.kappa);
  OptimizeReport rep = optimize_rho_detailed(
      [&](double r) { return ctx.f_hat(r); }, iv.lo, iv.hi, opts.grid_step,
      opts.refine_xtol);
  ctx.solve_final(rep.rho_star, opts.final_tol);
  DesignOutput out;
  finish(out, ctx.sigma2_hat(rep.rho_star), eta, ctx.N(), std::move(rep),
         opts.keep_curve);
  return out;
}

}  // namespace anmf
