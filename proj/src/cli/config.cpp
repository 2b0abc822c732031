#include <algorithm>
#include <string>

#include "localdep/cli.hpp"

namespace localdep::cli {

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::compute: return "compute";
    case Command::sweep: return "sweep";
    case Command::converge: return "converge";
    case Command::bench: return "bench";
    case Command::selftest: return "selftest";
  }
  return "compute";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::compute, Command::sweep, Command::converge, Command::bench,
                    Command::selftest}) {
    if (name == command_name(c)) {
      return c;
    }
  }
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace

const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names = {
      "adjacent_l1", "zeta_eps",    "zeta_limit", "xi",         "xi_large",
      "eta2_knn",    "eta2_binned", "r2",         "delta_mean", "xi_bruteforce"};
  return names;
}

void validate(const RunConfig& cfg) {
  for (const auto& e : cfg.estimators) {
    const auto& names = estimator_names();
    if (std::find(names.begin(), names.end(), e) == names.end()) {
      throw ConfigError("unknown estimator '" + e + "'");
    }
  }
  if (cfg.reps < 1) {
    throw ConfigError("--reps must be at least 1");
  }
  if (cfg.threads < 1) {
    throw ConfigError("--threads must be at least 1");
  }
  switch (cfg.command) {
    case Command::compute:
      if (cfg.input.has_value() == cfg.gen.has_value()) {
        throw ConfigError("compute needs exactly one of --input or --gen");
      }
      if (cfg.estimators.empty()) {
        throw ConfigError("compute needs at least one estimator");
      }
      if (std::find(cfg.estimators.begin(), cfg.estimators.end(), "zeta_eps") !=
              cfg.estimators.end() &&
          cfg.eps.empty()) {
        throw ConfigError("zeta_eps needs --eps");
      }
      if (std::find(cfg.estimators.begin(), cfg.estimators.end(), "delta_mean") !=
              cfg.estimators.end() &&
          cfg.delta.empty()) {
        throw ConfigError("delta_mean needs --delta");
      }
      break;
    case Command::sweep:
      if (cfg.rho_grid.empty()) {
        throw ConfigError("sweep needs a non-empty --rho-grid");
      }
      if (cfg.input) {
        throw ConfigError("sweep draws its own data; --input is not accepted");
      }
      break;
    case Command::converge:
      if (!cfg.gen) {
        throw ConfigError("converge needs --gen");
      }
      if (cfg.eps.empty() && cfg.n_grid.empty() && cfg.delta.empty()) {
        throw ConfigError("converge needs --eps, --n-grid or --delta");
      }
      break;
    case Command::bench:
      if (cfg.n_grid.empty()) {
        throw ConfigError("bench needs a non-empty --n-grid");
      }
      break;
    case Command::selftest:
      break;
  }
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["command"] = command_name(cfg.command);
  if (cfg.input) {
    j["input"] = *cfg.input;
  }
  if (cfg.gen) {
    j["gen"] = {{"family", to_string(cfg.gen->family)},
                {"rho", cfg.gen->rho},
                {"n", cfg.gen->n},
                {"seed", cfg.gen->seed},
                {"f", to_string(cfg.gen->f)}};
  }
  j["estimators"] = cfg.estimators;
  j["eps"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["k"] = cfg.k ? nlohmann::ordered_json(*cfg.k) : nlohmann::ordered_json(nullptr);
  j["bins"] = cfg.bins ? nlohmann::ordered_json(*cfg.bins) : nlohmann::ordered_json(nullptr);
  j["rho_grid"] = cfg.rho_grid;
  j["n_grid"] = cfg.n_grid;
  j["n"] = cfg.n;
  j["reps"] = cfg.reps;
  j["seed"] = cfg.seed;
  j["force_quadratic"] = cfg.force_quadratic;
  j["format"] = cfg.format == OutputFormat::json ? "json" : "csv";
  return j;
}

RunConfig config_from_json(const nlohmann::json& doc) {
  const nlohmann::json& j = doc.contains("config") ? doc.at("config") : doc;
  try {
    RunConfig cfg;
    cfg.command = parse_command(j.at("command").get<std::string>());
    if (j.contains("input")) {
      cfg.input = j.at("input").get<std::string>();
    }
    if (j.contains("gen")) {
      cfg.gen = j.at("gen").get<GeneratorSpec>();
    }
    cfg.estimators = j.value("estimators", std::vector<std::string>{});
    cfg.eps = j.value("eps", std::vector<double>{});
    cfg.delta = j.value("delta", std::vector<double>{});
    if (j.contains("k") && !j.at("k").is_null()) {
      cfg.k = j.at("k").get<std::size_t>();
    }
    if (j.contains("bins") && !j.at("bins").is_null()) {
      cfg.bins = j.at("bins").get<std::size_t>();
    }
    cfg.rho_grid = j.value("rho_grid", std::vector<double>{});
    cfg.n_grid = j.value("n_grid", std::vector<std::size_t>{});
    cfg.n = j.value("n", std::size_t{1000});
    cfg.reps = j.value("reps", std::size_t{1});
    cfg.seed = j.value("seed", Seed{0});
    cfg.force_quadratic = j.value("force_quadratic", false);
    cfg.format = j.value("format", std::string("json")) == "csv" ? OutputFormat::csv
                                                                 : OutputFormat::json;
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

}  // namespace localdep::cli
