#include "anmf/config.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "anmf/clutter.hpp"
#include "anmf/covariance.hpp"
#include "anmf/design.hpp"
#include "anmf/errors.hpp"
#include "anmf/io.hpp"
#include "anmf/rng.hpp"
#include "anmf/theory.hpp"

namespace anmf {

using nlohmann::json;

namespace {

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw InvalidParameter("config key '" + key + "': " + what);
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) key_error(key, "expected a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) key_error(key, "expected an integer");
  return v.get<long>();
}

std::uint64_t as_seed(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  key_error(key, "expected a nonnegative integer");
}

cxd parse_b(const json& v) {
  if (v.is_number()) return cxd(v.get<double>(), 0.0);
  if (v.is_object()) {
    double re = 0.0, im = 0.0;
    for (const auto& el : v.items()) {
      if (el.key() == "re")
        re = as_number(el.value(), "b.re");
      else if (el.key() == "im")
        im = as_number(el.value(), "b.im");
      else
        key_error("b", "unknown field '" + el.key() + "'");
    }
    return cxd(re, im);
  }
  key_error("b", "expected a number or an object {re, im}");
}

std::vector<double> parse_eta(const json& v) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& el : v) out.push_back(as_number(el, "eta"));
  } else {
    key_error("eta", "expected a number or an array of numbers");
  }
  if (out.empty()) key_error("eta", "must contain at least one target");
  return out;
}

bool parse_full_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  const auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

}  // namespace

MethodSpec parse_method_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, ':')) parts.push_back(cur);
  if (parts.empty())
    throw InvalidParameter("method: empty specification");

  MethodSpec ms;
  if (parts[0] == "rscm")
    ms.method = Method::Rscm;
  else if (parts[0] == "rte")
    ms.method = Method::Rte;
  else
    throw InvalidParameter("method: expected 'rscm' or 'rte', got '" +
                           parts[0] + "'");
  if (parts.size() == 1) return ms;
  if (parts.size() > 2)
    throw InvalidParameter("method: expected NAME or NAME:optimal or "
                           "NAME:RHO, got '" + text + "'");
  if (parts[1] == "optimal") return ms;
  double rho = 0.0;
  if (!parse_full_double(parts[1], rho))
    throw InvalidParameter("method: cannot parse shrinkage value '" +
                           parts[1] + "'");
  if (!(rho > 0.0 && rho <= 1.0))
    throw InvalidParameter("method: fixed rho must lie in (0, 1], got " +
                           parts[1]);
  ms.rho_mode = RhoMode::Fixed;
  ms.rho_fixed = rho;
  return ms;
}

std::string method_spec_label(const MethodSpec& ms) {
  std::string label = method_name(ms.method);
  if (ms.rho_mode == RhoMode::Optimal) return label + "-optimal";
  return label + "-fixed(" + format_double(ms.rho_fixed) + ")";
}

RunOptions RunConfig::run_options(const MethodSpec& ms) const {
  RunOptions o;
  o.method = ms.method;
  o.rho_mode = ms.rho_mode;
  o.rho_fixed = ms.rho_fixed;
  o.kappa = kappa;
  o.grid_step = grid_step;
  o.refine_xtol = refine_xtol;
  o.calibration_trials = calibration_trials;
  return o;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw InvalidParameter("config: top level must be a JSON object");

  static const std::set<std::string> allowed = {
      "N",     "n",         "b",        "theta",     "a",
      "nu",    "eta",       "trials",   "seed",      "method",
      "rho",   "methods",   "kappa",    "grid_step", "refine_xtol",
      "out",   "rho_start", "rho_stop", "rho_step",  "calibration_trials"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw InvalidParameter("config: unknown key '" + it.key() + "'");
  }
  for (const char* req : {"N", "n", "b", "theta", "a"}) {
    if (!j.contains(req))
      throw InvalidParameter("config: missing required key '" +
                             std::string(req) + "'");
  }

  RunConfig cfg;
  Scenario& sc = cfg.scenario;
  sc.N = static_cast<int>(as_integer(j["N"], "N"));
  sc.n = static_cast<int>(as_integer(j["n"], "n"));
  sc.covariance = CovarianceSpec::toeplitz(parse_b(j["b"]));
  sc.theta_deg = as_number(j["theta"], "theta");
  sc.a = as_number(j["a"], "a");
  if (j.contains("nu"))
    sc.texture = TextureModel::gamma_k(as_number(j["nu"], "nu"));
  sc.eta_grid = j.contains("eta") ? parse_eta(j["eta"])
                                  : std::vector<double>{0.05};
  if (j.contains("trials")) sc.trials = as_integer(j["trials"], "trials");
  if (j.contains("seed")) sc.seed = as_seed(j["seed"], "seed");

  if (j.contains("methods") && (j.contains("method") || j.contains("rho")))
    throw InvalidParameter(
        "config: specify either 'methods' or 'method'/'rho', not both");
  if (j.contains("methods")) {
    if (!j["methods"].is_array() || j["methods"].empty())
      key_error("methods", "expected a nonempty array of method strings");
    cfg.methods.clear();
    for (const auto& el : j["methods"]) {
      if (!el.is_string()) key_error("methods", "entries must be strings");
      cfg.methods.push_back(parse_method_spec(el.get<std::string>()));
    }
  } else {
    std::string spec = "rscm";
    if (j.contains("method")) {
      if (!j["method"].is_string())
        key_error("method", "expected 'rscm' or 'rte'");
      spec = j["method"].get<std::string>();
      if (spec.find(':') != std::string::npos)
        key_error("method", "use the 'rho' key for the shrinkage mode");
    }
    if (j.contains("rho")) {
      const json& r = j["rho"];
      if (r.is_string()) {
        if (r.get<std::string>() != "optimal")
          key_error("rho", "expected 'optimal' or a number");
        spec += ":optimal";
      } else if (r.is_number()) {
        spec += ":" + format_double(r.get<double>());
      } else {
        key_error("rho", "expected 'optimal' or a number");
      }
    }
    cfg.methods = {parse_method_spec(spec)};
  }

  if (j.contains("kappa")) {
    cfg.kappa = as_number(j["kappa"], "kappa");
    if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0))
      key_error("kappa", "must lie in (0, 1)");
  }
  if (j.contains("grid_step")) {
    cfg.grid_step = as_number(j["grid_step"], "grid_step");
    if (!(cfg.grid_step > 0.0)) key_error("grid_step", "must be positive");
  }
  if (j.contains("refine_xtol")) {
    cfg.refine_xtol = as_number(j["refine_xtol"], "refine_xtol");
    if (!(cfg.refine_xtol > 0.0)) key_error("refine_xtol", "must be positive");
  }
  if (j.contains("calibration_trials")) {
    cfg.calibration_trials =
        static_cast<int>(as_integer(j["calibration_trials"],
                                    "calibration_trials"));
    if (cfg.calibration_trials < 1)
      key_error("calibration_trials", "must be >= 1");
  }
  if (j.contains("rho_start"))
    cfg.rho_start = as_number(j["rho_start"], "rho_start");
  if (j.contains("rho_stop")) cfg.rho_stop = as_number(j["rho_stop"], "rho_stop");
  if (j.contains("rho_step")) cfg.rho_step = as_number(j["rho_step"], "rho_step");
  if (!(cfg.rho_start > 0.0 && cfg.rho_start <= cfg.rho_stop &&
        cfg.rho_stop <= 1.0))
    throw InvalidParameter(
        "config: rho_start/rho_stop must satisfy 0 < rho_start <= rho_stop "
        "<= 1");
  if (!(cfg.rho_step > 0.0)) key_error("rho_step", "must be positive");
  if (j.contains("out")) {
    if (!j["out"].is_string()) key_error("out", "expected a path string");
    cfg.out_path = j["out"].get<std::string>();
  }

  sc.validate();

  // deterministic echo of the fully resolved configuration
  json echo;
  echo["N"] = sc.N;
  echo["n"] = sc.n;
  const cxd b = std::get<cxd>(sc.covariance.value);
  echo["b"] = {{"re", b.real()}, {"im", b.imag()}};
  echo["theta"] = sc.theta_deg;
  echo["a"] = sc.a;
  if (sc.texture.kind == TextureKind::GammaK) echo["nu"] = sc.texture.nu;
  echo["eta"] = sc.eta_grid;
  echo["trials"] = sc.trials;
  echo["seed"] = sc.seed;
  {
    json ms_list = json::array();
    for (const MethodSpec& ms : cfg.methods) ms_list.push_back(method_spec_label(ms));
    echo["methods"] = ms_list;
  }
  echo["kappa"] = cfg.kappa;
  echo["grid_step"] = cfg.grid_step;
  echo["refine_xtol"] = cfg.refine_xtol;
  echo["calibration_trials"] = cfg.calibration_trials;
  echo["rho_start"] = cfg.rho_start;
  echo["rho_stop"] = cfg.rho_stop;
  echo["rho_step"] = cfg.rho_step;
  if (!cfg.out_path.empty()) echo["out"] = cfg.out_path;
  cfg.echo = echo.dump();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  return parse_config(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> metadata(const RunConfig& cfg,
                                  const std::string& verb) {
  return {"anmf " + version_string(), "verb: " + verb,
          "seed: " + std::to_string(cfg.scenario.seed), "config: " + cfg.echo};
}

std::vector<double> rho_grid(double start, double stop, double step) {
  std::vector<double> grid;
  const int steps = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int i = 0; i <= steps; ++i)
    grid.push_back(std::min(start + i * step, stop));
  if (grid.back() < stop - 1e-12) grid.push_back(stop);
  return grid;
}

std::string run_theory_curve(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const MethodSpec ms = cfg.methods.front();
  const SpectralMeasure sm = spectral_measure(sc.covariance_matrix());
  const Vec p = sc.steering();
  const double c = sc.c();

  std::vector<std::string> header = {"rho", "m", "rho_bar", "sigma2", "g", "f"};
  for (size_t k = 1; k <= sc.eta_grid.size(); ++k) {
    const std::string suffix = std::to_string(k);
    header.push_back("eta" + suffix);
    header.push_back("r" + suffix);
    header.push_back("pd" + suffix);
  }

  std::vector<std::vector<std::string>> rows;
  for (double rho : rho_grid(cfg.rho_start, cfg.rho_stop, cfg.rho_step)) {
    const TheoryReport rep =
        ms.method == Method::Rscm
            ? theory_scm(sm, p, c, rho, sc.a)
            : theory_rte(sm, p, c, rho, sc.a, sc.texture);
    std::vector<std::string> row = {
        format_double(rep.rho),    format_double(rep.m),
        format_double(rep.rho_bar), format_double(rep.sigma2),
        format_double(rep.g),      format_double(rep.f)};
    const double sigma = std::sqrt(rep.sigma2);
    for (double eta : sc.eta_grid) {
      const double r = set_threshold(sigma, eta);
      row.push_back(format_double(eta));
      row.push_back(format_double(r));
      row.push_back(format_double(rep.pd(r)));
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::string> comments = metadata(cfg, "theory-curve");
  comments.push_back("method: " + std::string(method_name(ms.method)));
  std::ostringstream os;
  write_csv(os, comments, header, rows);
  return os.str();
}

std::string run_optimize_rho(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const MethodSpec ms = cfg.methods.front();
  const double eta0 = sc.eta_grid.front();

  // one secondary-data draw, laid out exactly like Monte Carlo trial 0
  auto eng_sec = substream(sc.seed, 0, StreamRole::Secondary);
  auto eng_tex = substream(sc.seed, 0, StreamRole::Texture);
  const Mat C_sqrt = hermitian_sqrt(sc.covariance_matrix());
  const ClutterBatch batch =
      generate_secondary(eng_sec, eng_tex, C_sqrt, sc.texture, sc.n);

  DesignOptions d;
  d.kappa = cfg.kappa;
  d.grid_step = cfg.grid_step;
  d.refine_xtol = cfg.refine_xtol;
  d.keep_curve = true;
  const Vec p = sc.steering();
  const DesignOutput out = ms.method == Method::Rscm
                               ? design_scm(batch.secondary, p, eta0, d)
                               : design_rte(batch.secondary, p, eta0, d);

  json res;
  res["verb"] = "optimize-rho";
  res["version"] = version_string();
  res["method"] = method_name(ms.method);
  res["config"] = json::parse(cfg.echo);
  res["eta"] = eta0;
  res["rho_star"] = out.rho_star;
  res["sigma_hat"] = out.sigma_hat;
  res["r_hat"] = out.r_hat;
  res["gamma_threshold"] = out.gamma_threshold;
  res["objective_at_star"] = out.objective_at_star;
  json curve = json::array();
  for (const auto& [rho, value] : out.objective_curve)
    curve.push_back({rho, value});
  res["objective_curve"] = curve;
  return res.dump(2) + "\n";
}

std::string run_simulate_roc(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const RunOptions base = cfg.run_options(cfg.methods.front());
  const std::vector<RatesTable> tables = roc_curve(sc, cfg.methods, base);

  const std::vector<std::string> header = {
      "method", "eta_target", "threshold", "rho_mean", "pfa_emp",
      "pfa_ci", "pd_emp",     "pd_ci",     "pd_theory"};
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < tables.size(); ++i) {
    const std::string label = method_spec_label(cfg.methods[i]);
    for (const RateRow& row : tables[i].rows) {
      rows.push_back({label, format_double(row.eta_target),
                      format_double(row.threshold),
                      format_double(tables[i].rho_mean),
                      format_double(row.pfa_emp), format_double(row.pfa_ci),
                      format_double(row.pd_emp), format_double(row.pd_ci),
                      format_double(row.pd_theory)});
    }
  }
  std::vector<std::string> comments = metadata(cfg, "simulate-roc");
  comments.push_back("trials: " + std::to_string(sc.trials));
  std::ostringstream os;
  write_csv(os, comments, header, rows);
  return os.str();
}

std::string run_calibrate_threshold(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const MethodSpec ms = cfg.methods.front();
  if (ms.rho_mode != RhoMode::Fixed)
    throw InvalidParameter(
        "calibrate-threshold requires a fixed-shrinkage method, e.g. "
        "\"rte:0.5\"");
  const RunOptions opts = cfg.run_options(ms);
  const std::vector<double> stats = calibrate_h0_statistics(sc, opts);

  const std::vector<std::string> header = {"eta_target", "r", "gamma"};
  std::vector<std::vector<std::string>> rows;
  const double sqrtN = std::sqrt(static_cast<double>(sc.N));
  for (double eta : sc.eta_grid) {
    const double r = empirical_threshold(stats, eta);
    rows.push_back({format_double(eta), format_double(r),
                    format_double(r / sqrtN)});
  }
  std::vector<std::string> comments = metadata(cfg, "calibrate-threshold");
  comments.push_back("method: " + method_spec_label(ms));
  comments.push_back("calibration_trials: " +
                     std::to_string(opts.calibration_trials));
  std::ostringstream os;
  write_csv(os, comments, header, rows);
  return os.str();
}

}  // namespace

int dispatch(const std::string& verb, const RunConfig& cfg) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    std::string artifact;
    if (verb == "theory-curve")
      artifact = run_theory_curve(cfg);
    else if (verb == "optimize-rho")
      artifact = run_optimize_rho(cfg);
    else if (verb == "simulate-roc")
      artifact = run_simulate_roc(cfg);
    else if (verb == "calibrate-threshold")
      artifact = run_calibrate_threshold(cfg);
    else
      throw InvalidParameter("unknown verb '" + verb + "'");

    if (cfg.out_path.empty())
      std::cout << artifact << std::flush;
    else
      write_text_file(cfg.out_path, artifact);

    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - t0;
    std::cerr << verb << ": done in " << format_double(dt.count()) << " s\n";
    return 0;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace anmf
