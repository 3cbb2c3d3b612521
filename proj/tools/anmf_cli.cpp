#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anmf/config.hpp"
#include "anmf/errors.hpp"
#include "anmf/io.hpp"

namespace {

bool parse_double_arg(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != nullptr && end != s.c_str() && *end == '\0';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive normalized matched filter: theory, design, and "
               "Monte Carlo evaluation"};

  std::string config_path, out_path, method_str, rho_str;
  std::vector<double> eta;
  std::uint64_t seed = 0;
  long trials = 0;

  app.add_option("--config", config_path, "JSON configuration file (required)");
  app.add_option("--seed", seed, "master RNG seed (overrides config)");
  app.add_option("--trials", trials,
                 "Monte Carlo trial count (overrides config)");
  app.add_option("--out", out_path,
                 "output path (overrides config; default stdout)");
  app.add_option("--method", method_str,
                 "estimator: rscm or rte (overrides config)")
      ->check(CLI::IsMember({"rscm", "rte"}));
  app.add_option("--rho", rho_str,
                 "shrinkage: 'optimal' or a value in (0,1] (overrides config)");
  app.add_option("--eta", eta, "false-alarm targets (overrides config)")
      ->delimiter(',');

  const std::pair<const char*, const char*> verbs[] = {
      {"theory-curve", "asymptotic Pfa/Pd quantities over a shrinkage grid"},
      {"optimize-rho",
       "data-driven shrinkage and threshold from one secondary-data draw"},
      {"simulate-roc", "Monte Carlo false-alarm/detection rates per method"},
      {"calibrate-threshold",
       "empirical H0 threshold for a fixed-shrinkage design"}};
  for (const auto& [name, desc] : verbs)
    app.add_subcommand(name, desc)->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (config_path.empty()) {
      std::cerr << "error: --config is required\n";
      return 2;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(anmf::read_text_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: config: invalid JSON: " << e.what() << "\n";
      return 2;
    }
    if (!j.is_object()) {
      std::cerr << "error: config: top level must be a JSON object\n";
      return 2;
    }
    if (app.count("--seed")) j["seed"] = seed;
    if (app.count("--trials")) j["trials"] = trials;
    if (app.count("--out")) j["out"] = out_path;
    if (app.count("--eta")) j["eta"] = eta;
    if (app.count("--method") || app.count("--rho")) {
      j.erase("methods");  // explicit flags replace any method list
      if (app.count("--method")) j["method"] = method_str;
      if (app.count("--rho")) {
        double v = 0.0;
        if (rho_str == "optimal")
          j["rho"] = "optimal";
        else if (parse_double_arg(rho_str, v))
          j["rho"] = v;
        else {
          std::cerr << "error: --rho expects 'optimal' or a number, got '"
                    << rho_str << "'\n";
          return 2;
        }
      }
    }
    const anmf::RunConfig cfg = anmf::parse_config(j.dump());
    const std::string verb = app.get_subcommands().front()->get_name();
    return anmf::dispatch(verb, cfg);
  } catch (const anmf::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const anmf::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
