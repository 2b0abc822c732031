#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "localdep/chatterjee.hpp"
#include "localdep/cli.hpp"
#include "localdep/epsresid.hpp"
#include "localdep/localdelta.hpp"
#include "localdep/moment.hpp"

namespace localdep::cli {

nlohmann::ordered_json to_json(const EstimatorReport& r) {
  nlohmann::ordered_json j;
  j["estimator"] = r.estimator;
  j["value"] = r.value;
  j["params"] = r.params;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["warnings"] = r.warnings;
  return j;
}

nlohmann::ordered_json to_json(const SweepRow& r) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["estimator"] = r.estimator;
  j["parameter"] = r.parameter;
  j["parameter_value"] = r.parameter_value;
  j["n"] = r.n;
  j["replicates"] = r.replicates;
  j["mean"] = opt(r.mean);
  j["sd"] = opt(r.sd);
  j["reference"] = opt(r.reference);
  j["deviation"] = r.mean && r.reference ? nlohmann::ordered_json(*r.mean - *r.reference)
                                         : nlohmann::ordered_json(nullptr);
  j["status"] = r.ok ? "ok" : "failed";
  j["message"] = r.message;
  return j;
}

nlohmann::ordered_json to_json(const BenchRow& r) {
  nlohmann::ordered_json j;
  j["estimator"] = r.estimator;
  j["n"] = r.n;
  j["seconds"] = r.seconds;
  j["value"] = r.value;
  return j;
}

nlohmann::ordered_json document(const RunConfig& cfg, nlohmann::ordered_json results) {
  nlohmann::ordered_json doc;
  doc["config"] = to_json(cfg);
  doc["results"] = std::move(results);
  doc["version"] = kVersion;
  return doc;
}

bool cmd_selftest(std::ostream& os) {
  bool all = true;
  const auto check = [&](const char* what, bool ok) {
    os << (ok ? "[ok]   " : "[FAIL] ") << what << '\n';
    all = all && ok;
  };
  const PairedSample monotone({1, 2, 3}, {10, 20, 30});
  check("xi on monotone 3-point sample is 0.25", chatterjee_xi(monotone, 0).xi == 0.25);
  check("xi on (10,30,20) is -0.125",
        chatterjee_xi(PairedSample({1, 2, 3}, {10, 30, 20}), 0).xi == -0.125);
  check("xi_large matches xi", chatterjee_xi_large(monotone, 0).xi == 0.25);
  const UnitSquareSample grid({0.25, 0.5, 0.75}, {0.25, 0.5, 0.75});
  check("zeta_hat(eps=0.3) is 1/6", std::abs(zeta_hat(grid, 0.3).zeta - 1.0 / 6.0) < 1e-15);
  check("zeta_limit equals zeta_hat on a grid", zeta_limit(grid).zeta == zeta_hat(grid, 0.3).zeta);
  check("adjacent_l1 of (1,3,2) is 1.5",
        adjacent_l1(PairedSample({1, 2, 3}, {1, 3, 2}), 0) == 1.5);
  const std::vector<double> v{1, 2, 3, 4};
  const L2Report l2 = l2_report(v, cond_mean_binned(std::vector<double>{0.2, 0.4, 0.6, 0.8}, v, 2));
  check("binned ANOVA: between 1.0, within 0.25", l2.between == 1.0 && l2.within == 0.25);
  check("normal_cdf(0) is 0.5", normal_cdf(0.0) == 0.5);
  return all;
}

namespace {

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw ConfigError("unknown format '" + s + "'");
}

Command parse_command_name(const std::string& s) {
  if (s == "compute") return Command::compute;
  if (s == "sweep") return Command::sweep;
  if (s == "converge") return Command::converge;
  if (s == "bench") return Command::bench;
  if (s == "selftest") return Command::selftest;
  throw ConfigError("unknown command '" + s + "'");
}

void emit(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (cfg.out.empty()) {
    body(out);
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) {
    throw DataError("cannot open output file '" + cfg.out + "'");
  }
  body(file);
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::compute: {
      const auto reports = cmd_compute(cfg);
      emit(cfg, out, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::csv) {
          write_reports_csv(os, reports);
        } else {
          nlohmann::ordered_json results = nlohmann::ordered_json::array();
          for (const auto& r : reports) results.push_back(to_json(r));
          os << document(cfg, std::move(results)).dump(2) << '\n';
        }
      });
      return kOk;
    }
    case Command::sweep:
    case Command::converge: {
      const SweepTable table = cfg.command == Command::sweep ? cmd_sweep(cfg) : cmd_converge(cfg);
      emit(cfg, out, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::csv) {
          write_sweep_csv(os, table);
        } else {
          nlohmann::ordered_json results = nlohmann::ordered_json::array();
          for (const auto& r : table.rows) results.push_back(to_json(r));
          os << document(cfg, std::move(results)).dump(2) << '\n';
        }
      });
      return kOk;
    }
    case Command::bench: {
      const BenchTable table = cmd_bench(cfg);
      emit(cfg, out, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::csv) {
          write_bench_csv(os, table);
        } else {
          nlohmann::ordered_json results = nlohmann::ordered_json::array();
          for (const auto& r : table.rows) results.push_back(to_json(r));
          auto doc = document(cfg, std::move(results));
          doc["scaling"] = {{"ratio", table.scaling_ratio ? nlohmann::ordered_json(*table.scaling_ratio)
                                                          : nlohmann::ordered_json(nullptr)},
                            {"limit", kMaxScalingRatio},
                            {"ok", table.scaling_ok}};
          os << doc.dump(2) << '\n';
        }
      });
      if (!table.scaling_ok) {
        err << "xi_large scaling ratio " << *table.scaling_ratio << " exceeds "
            << kMaxScalingRatio << '\n';
        return kPrecondition;
      }
      return kOk;
    }
    case Command::selftest:
      return cmd_selftest(out) ? kOk : kPrecondition;
  }
  return kUsage;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"localdep: local dependence measures and rank correlation"};
  std::string command;
  std::string input;
  std::string gen;
  double rho = 0.0;
  std::string f = "identity";
  std::size_t n = 1000;
  Seed seed = 0;
  std::vector<double> eps;
  std::vector<double> delta;
  std::size_t k = 0;
  std::size_t bins = 0;
  std::vector<double> rho_grid;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 1;
  std::vector<std::string> estimators;
  std::string out_path;
  std::string format = "json";
  bool force_quadratic = false;
  std::size_t threads = 1;
  std::string config_path;

  app.add_option("command", command, "compute | sweep | converge | bench | selftest")
      ->required()
      ->check(CLI::IsMember({"compute", "sweep", "converge", "bench", "selftest"}));
  auto* input_opt = app.add_option("--input", input, "CSV file with two numeric columns");
  auto* gen_opt = app.add_option("--gen", gen, "generator family")
                      ->check(CLI::IsMember({"bivariate_normal", "gaussian_copula", "functional",
                                             "independent"}));
  input_opt->excludes(gen_opt);
  app.add_option("--rho", rho, "generator correlation");
  app.add_option("--f", f, "functional shape: identity | square | sine | step");
  app.add_option("--n", n, "sample size");
  app.add_option("--seed", seed, "master seed (generator and tie-break)");
  app.add_option("--eps", eps, "epsilon list")->delimiter(',');
  app.add_option("--delta", delta, "delta list")->delimiter(',');
  auto* k_opt = app.add_option("--k", k, "kNN neighbors (default ceil(sqrt n))");
  auto* bins_opt = app.add_option("--bins", bins, "regressogram bins (default ceil(cbrt n))");
  app.add_option("--rho-grid", rho_grid, "rho list for sweep")->delimiter(',');
  app.add_option("--n-grid", n_grid, "n list for converge/bench")->delimiter(',');
  app.add_option("--reps", reps, "replicates per grid point");
  app.add_option("--estimators", estimators, "estimator list")->delimiter(',');
  auto* out_opt = app.add_option("--out", out_path, "output path (default stdout)");
  auto* format_opt = app.add_option("--format", format, "json | csv");
  app.add_flag("--force-quadratic", force_quadratic, "allow O(n^2) oracles above the guard");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads for replicates");
  app.add_option("--config", config_path, "re-run the config embedded in a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        throw ConfigError("cannot open config '" + config_path + "'");
      }
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not JSON: ") + e.what());
      }
      cfg = config_from_json(doc);
      if (cfg.command != parse_command_name(command)) {
        throw ConfigError("config holds a different command");
      }
    } else {
      cfg.command = parse_command_name(command);
      if (*input_opt) cfg.input = input;
      if (*gen_opt) {
        GeneratorSpec spec;
        try {
          spec.family = parse_family(gen);
          spec.f = parse_function(f);
        } catch (const PreconditionError& e) {
          throw ConfigError(e.what());
        }
        spec.rho = rho;
        spec.n = n;
        spec.seed = seed;
        cfg.gen = spec;
      }
      cfg.n = n;
      cfg.seed = seed;
      cfg.eps = eps;
      cfg.delta = delta;
      if (*k_opt) cfg.k = k;
      if (*bins_opt) cfg.bins = bins;
      cfg.rho_grid = rho_grid;
      cfg.n_grid = n_grid;
      cfg.reps = reps;
      cfg.estimators = estimators;
      cfg.force_quadratic = force_quadratic;
      cfg.format = parse_format(format);
    }
    if (*out_opt) cfg.out = out_path;
    if (*format_opt) cfg.format = parse_format(format);
    if (*threads_opt) cfg.threads = threads;
    validate(cfg);
    return execute(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace localdep::cli
