#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "localdep/chatterjee.hpp"
#include "localdep/cli.hpp"
#include "localdep/epsresid.hpp"
#include "localdep/localdelta.hpp"
#include "localdep/moment.hpp"
#include "localdep/oracle.hpp"

namespace localdep::cli {

namespace {

bool wants(const std::vector<std::string>& list, const std::string& name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

const char* form_name(DenominatorForm f) {
  return f == DenominatorForm::no_ties ? "no-ties" : "tie-corrected";
}

EstimatorReport xi_report(const std::string& name, const XiReport& xr, Seed seed) {
  EstimatorReport r{name, xr.xi, {}, xr.n, seed, {}};
  r.params["numerator"] = xr.numerator;
  r.params["denominator_form"] = form_name(xr.denominator_form);
  r.params["tie_seed"] = xr.tie_seed;
  if (xr.denominator_form == DenominatorForm::tie_corrected) {
    r.warnings.push_back("ties in y: tie-corrected denominator");
  }
  return r;
}

EstimatorReport residual_report(const std::string& name, const ResidualEstimate& est, Seed seed) {
  EstimatorReport r{name, est.zeta, {}, est.n, seed, {}};
  if (est.epsilon) {
    r.params["epsilon"] = *est.epsilon;
  } else {
    r.params["epsilon"] = "limit";
  }
  r.params["xi"] = est.xi;
  r.params["used"] = est.used;
  if (!est.calibrated) {
    r.warnings.push_back("non-calibrated: v is not on the empirical PIT grid");
  }
  if (est.n == 2 && !est.epsilon) {
    r.warnings.push_back("n=2 is degenerate for the rank-adjacent limit");
  }
  return r;
}

// Conditioning on the empirical PIT of x keeps the regressogram on [0, 1];
// the response stays on its raw scale.
L2Report eta2_binned(const PairedSample& s, const UnitSquareSample& unit,
                     std::optional<std::size_t> bins) {
  const std::size_t b = bins.value_or(default_bins(s.size()));
  return l2_report(s.ys(), cond_mean_binned(unit.us(), s.ys(), b));
}

L2Report eta2_knn(const PairedSample& s, const UnitSquareSample& unit,
                  std::optional<std::size_t> k) {
  const std::size_t kk = k.value_or(default_knn_k(s.size()));
  return l2_report(s.ys(), cond_mean_knn(unit.us(), s.ys(), kk));
}

double sample_sd(const std::vector<double>& values, double mean) {
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

struct Cell {
  std::optional<double> value;
  std::string error;
};

// Folds replicate cells into one row; any failed replicate fails the row.
void summarize(SweepRow& row, const std::vector<Cell>& cells) {
  row.replicates = cells.size();
  std::vector<double> values;
  for (const auto& c : cells) {
    if (!c.value) {
      row.ok = false;
      row.message = c.error;
      return;
    }
    values.push_back(*c.value);
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  row.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    row.sd = sample_sd(values, *row.mean);
  }
}

std::optional<double> zeta_reference(const GeneratorSpec& spec) {
  switch (spec.family) {
    case Family::functional: return 0.0;
    case Family::independent: return 0.25;
    default: return std::nullopt;
  }
}

// Best wall time over at least `min_repeats` runs, continuing until about
// 1.5 s has been spent or 40 runs are done.
template <class F>
double seconds_of(F&& f, int min_repeats, double& value) {
  double best = 1e300;
  double spent = 0.0;
  for (int i = 0; i < 40 && (i < min_repeats || spent < 1.5); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    value = f();
    const auto t1 = std::chrono::steady_clock::now();
    const double dt = std::chrono::duration<double>(t1 - t0).count();
    best = std::min(best, dt);
    spent += dt;
  }
  return best;
}

}  // namespace

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      task(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    const std::size_t w = std::min(threads, count);
    for (std::size_t t = 0; t < w; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

PairedSample load_input(const RunConfig& cfg) {
  if (cfg.input) {
    return read_sample_csv(*cfg.input);
  }
  if (cfg.gen) {
    return generate(*cfg.gen);
  }
  throw ConfigError("no input source");
}

std::vector<EstimatorReport> cmd_compute(const RunConfig& cfg) {
  validate(cfg);
  const PairedSample s = load_input(cfg);
  const Seed seed = cfg.seed;
  std::optional<UnitSquareSample> unit;
  const auto pit = [&]() -> const UnitSquareSample& {
    if (!unit) {
      unit = empirical_pit(s);
    }
    return *unit;
  };

  std::vector<EstimatorReport> reports;
  for (const auto& name : cfg.estimators) {
    if (name == "adjacent_l1") {
      EstimatorReport r{name, adjacent_l1(s, seed), {}, s.size(), seed, {}};
      r.params["tie_seed"] = seed;
      reports.push_back(std::move(r));
    } else if (name == "zeta_eps") {
      for (double eps : cfg.eps) {
        reports.push_back(residual_report(name, zeta_hat(pit(), eps), seed));
      }
    } else if (name == "zeta_limit") {
      reports.push_back(residual_report(name, zeta_limit(pit()), seed));
    } else if (name == "xi") {
      reports.push_back(xi_report(name, chatterjee_xi(s, seed), seed));
    } else if (name == "xi_large") {
      reports.push_back(xi_report(name, chatterjee_xi_large(s, seed), seed));
    } else if (name == "xi_bruteforce") {
      EstimatorReport r{name, oracle::xi_bruteforce(s, seed, cfg.force_quadratic), {}, s.size(),
                        seed, {}};
      r.params["tie_seed"] = seed;
      reports.push_back(std::move(r));
    } else if (name == "eta2_knn") {
      const L2Report l2 = eta2_knn(s, pit(), cfg.k);
      EstimatorReport r{name, l2.eta2, {}, s.size(), seed, {}};
      r.params["k"] = cfg.k.value_or(default_knn_k(s.size()));
      r.params["zeta2"] = l2.zeta2;
      r.params["var_v"] = l2.var_v;
      reports.push_back(std::move(r));
    } else if (name == "eta2_binned") {
      const L2Report l2 = eta2_binned(s, pit(), cfg.bins);
      EstimatorReport r{name, l2.eta2, {}, s.size(), seed, {}};
      r.params["bins"] = cfg.bins.value_or(default_bins(s.size()));
      r.params["zeta2"] = l2.zeta2;
      r.params["var_v"] = l2.var_v;
      r.params["between"] = l2.between;
      r.params["within"] = l2.within;
      reports.push_back(std::move(r));
    } else if (name == "r2") {
      reports.push_back(EstimatorReport{name, r_squared_ols(s), {}, s.size(), seed, {}});
    } else if (name == "delta_mean") {
      for (double delta : cfg.delta) {
        EstimatorReport r{name, local_delta_mean(s, delta), {}, s.size(), seed, {}};
        r.params["delta"] = delta;
        reports.push_back(std::move(r));
      }
    }
  }
  return reports;
}

SweepTable cmd_sweep(const RunConfig& cfg) {
  validate(cfg);
  std::vector<std::string> estimators = cfg.estimators;
  if (estimators.empty()) {
    estimators = {"xi", "eta2_binned"};
  }
  for (const auto& e : estimators) {
    if (!wants({"xi", "xi_large", "zeta_limit", "eta2_binned", "eta2_knn", "r2"}, e)) {
      throw ConfigError("estimator '" + e + "' is not available in sweep");
    }
  }
  const std::size_t grid = cfg.rho_grid.size();
  const std::size_t reps = cfg.reps;
  const std::size_t est_count = estimators.size();

  // cells[(g * reps + r) * est_count + e]
  std::vector<Cell> cells(grid * reps * est_count);
  parallel_for(grid * reps, cfg.threads, [&](std::size_t task) {
    const std::size_t g = task / reps;
    const std::size_t r = task % reps;
    Cell* out = &cells[task * est_count];
    GeneratorSpec spec;
    spec.family = Family::bivariate_normal;
    spec.rho = cfg.rho_grid[g];
    spec.n = cfg.n;
    spec.seed = substream_seed(substream_seed(cfg.seed, g), r);
    std::optional<PairedSample> s;
    try {
      s = generate(spec);
    } catch (const std::exception& e) {
      for (std::size_t k = 0; k < est_count; ++k) {
        out[k].error = e.what();
      }
      return;
    }
    std::optional<UnitSquareSample> unit;
    for (std::size_t k = 0; k < est_count; ++k) {
      const std::string& name = estimators[k];
      try {
        if ((name == "zeta_limit" || name.starts_with("eta2")) && !unit) {
          unit = empirical_pit(*s);
        }
        if (name == "xi") {
          out[k].value = chatterjee_xi(*s, spec.seed).xi;
        } else if (name == "xi_large") {
          out[k].value = chatterjee_xi_large(*s, spec.seed).xi;
        } else if (name == "zeta_limit") {
          out[k].value = zeta_limit(*unit).xi;
        } else if (name == "eta2_binned") {
          out[k].value = eta2_binned(*s, *unit, cfg.bins).eta2;
        } else if (name == "eta2_knn") {
          out[k].value = eta2_knn(*s, *unit, cfg.k).eta2;
        } else if (name == "r2") {
          out[k].value = r_squared_ols(*s);
        }
      } catch (const std::exception& e) {
        out[k].error = e.what();
      }
    }
  });

  SweepTable table;
  for (std::size_t g = 0; g < grid; ++g) {
    for (std::size_t k = 0; k < est_count; ++k) {
      SweepRow row;
      row.estimator = estimators[k];
      row.parameter = "rho";
      row.parameter_value = cfg.rho_grid[g];
      row.n = cfg.n;
      row.reference = cfg.rho_grid[g] * cfg.rho_grid[g];
      std::vector<Cell> rep_cells;
      for (std::size_t r = 0; r < reps; ++r) {
        rep_cells.push_back(cells[(g * reps + r) * est_count + k]);
      }
      summarize(row, rep_cells);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

SweepTable cmd_converge(const RunConfig& cfg) {
  validate(cfg);
  const GeneratorSpec base = *cfg.gen;

  struct Plan {
    std::string estimator;
    std::string parameter;
    double value;
    std::size_t n;
  };
  std::vector<Plan> plan;
  for (double eps : cfg.eps) {
    plan.push_back({"zeta_eps", "epsilon", eps, cfg.n});
  }
  for (std::size_t n : cfg.n_grid) {
    plan.push_back({"zeta_limit", "n", static_cast<double>(n), n});
  }
  for (double delta : cfg.delta) {
    plan.push_back({"delta_mean", "delta", delta, cfg.n});
  }

  const std::size_t reps = cfg.reps;
  std::vector<Cell> cells(plan.size() * reps);
  parallel_for(cells.size(), cfg.threads, [&](std::size_t task) {
    const Plan& p = plan[task / reps];
    GeneratorSpec spec = base;
    spec.n = p.n;
    spec.seed = substream_seed(substream_seed(cfg.seed, task / reps), task % reps);
    try {
      const PairedSample s = generate(spec);
      if (p.estimator == "zeta_eps") {
        cells[task].value = zeta_hat(empirical_pit(s), p.value).zeta;
      } else if (p.estimator == "zeta_limit") {
        cells[task].value = zeta_limit(empirical_pit(s)).zeta;
      } else {
        cells[task].value = local_delta_mean(s, p.value);
      }
    } catch (const std::exception& e) {
      cells[task].error = e.what();
    }
  });

  SweepTable table;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    SweepRow row;
    row.estimator = plan[j].estimator;
    row.parameter = plan[j].parameter;
    row.parameter_value = plan[j].value;
    row.n = plan[j].n;
    if (plan[j].estimator != "delta_mean") {
      row.reference = zeta_reference(base);
    }
    summarize(row, std::vector<Cell>(cells.begin() + static_cast<std::ptrdiff_t>(j * reps),
                                     cells.begin() + static_cast<std::ptrdiff_t>((j + 1) * reps)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

BenchTable cmd_bench(const RunConfig& cfg) {
  validate(cfg);
  std::vector<std::string> estimators = cfg.estimators;
  if (estimators.empty()) {
    estimators = {"xi_large"};
  }
  BenchTable table;
  for (std::size_t n : cfg.n_grid) {
    GeneratorSpec spec;
    spec.family = Family::independent;
    spec.n = n;
    spec.seed = cfg.seed;
    const PairedSample s = generate(spec);
    for (const auto& name : estimators) {
      BenchRow row{name, n, 0.0, 0.0};
      const int repeats = 5;
      if (name == "xi_large") {
        // Steady-state timing: the workspace stays mapped across repeats.
        XiWorkspace ws;
        row.seconds =
            seconds_of([&] { return chatterjee_xi_large(s, cfg.seed, ws).xi; }, repeats, row.value);
      } else if (name == "xi") {
        row.seconds = seconds_of([&] { return chatterjee_xi(s, cfg.seed).xi; }, repeats, row.value);
      } else if (name == "xi_bruteforce") {
        row.seconds = seconds_of(
            [&] { return oracle::xi_bruteforce(s, cfg.seed, cfg.force_quadratic); }, 1, row.value);
      } else if (name == "zeta_limit") {
        row.seconds = seconds_of([&] { return zeta_limit(empirical_pit(s)).zeta; }, repeats, row.value);
      } else if (name == "r2") {
        row.seconds = seconds_of([&] { return r_squared_ols(s); }, repeats, row.value);
      } else {
        throw ConfigError("estimator '" + name + "' is not available in bench");
      }
      table.rows.push_back(row);
    }
  }
  // Largest (n, 10n) pair timed for xi_large.
  for (const auto& small : table.rows) {
    for (const auto& big : table.rows) {
      if (small.estimator == "xi_large" && big.estimator == "xi_large" && big.n == 10 * small.n &&
          small.seconds > 0.0) {
        table.scaling_ratio = big.seconds / small.seconds;
        table.scaling_ok = *table.scaling_ratio <= kMaxScalingRatio;
      }
    }
  }
  return table;
}

}  // namespace localdep::cli
