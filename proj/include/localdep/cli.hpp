#pragma once

// Command layer behind the `localdep` tool: run configuration, sweep and
// convergence tables, report emission and the process entry point.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "localdep/core.hpp"
#include "localdep/synth.hpp"

namespace localdep::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kPrecondition = 3 };

/// Invalid flag combinations or values (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { compute, sweep, converge, bench, selftest };
enum class OutputFormat { json, csv };

struct RunConfig {
  Command command = Command::compute;
  std::optional<std::string> input;   // CSV path
  std::optional<GeneratorSpec> gen;   // or a generator
  std::vector<std::string> estimators;
  std::vector<double> eps;
  std::vector<double> delta;
  std::optional<std::size_t> k;
  std::optional<std::size_t> bins;
  std::vector<double> rho_grid;
  std::vector<std::size_t> n_grid;
  std::size_t n = 1000;
  std::size_t reps = 1;
  Seed seed = 0;
  std::size_t threads = 1;
  bool force_quadratic = false;
  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::json;
};

/// Throws ConfigError when the configuration is inconsistent for its command.
void validate(const RunConfig& cfg);

nlohmann::ordered_json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

/// Known estimator names.
const std::vector<std::string>& estimator_names();

struct EstimatorReport {
  std::string estimator;
  double value = 0.0;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::size_t n = 0;
  Seed seed = 0;
  std::vector<std::string> warnings;
};

struct SweepRow {
  std::string estimator;
  std::string parameter;  // "rho", "epsilon", "n" or "delta"
  double parameter_value = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::optional<double> mean;
  std::optional<double> sd;         // present iff replicates > 1 and the row succeeded
  std::optional<double> reference;  // population value when one is known
  bool ok = true;
  std::string message;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

struct BenchRow {
  std::string estimator;
  std::size_t n = 0;
  double seconds = 0.0;
  double value = 0.0;
};

struct BenchTable {
  std::vector<BenchRow> rows;
  std::optional<double> scaling_ratio;  // time(10n) / time(n) for xi_large
  bool scaling_ok = true;
};

inline constexpr double kMaxScalingRatio = 15.0;

/// Loads the configured input (CSV or generator).
PairedSample load_input(const RunConfig& cfg);

std::vector<EstimatorReport> cmd_compute(const RunConfig& cfg);
SweepTable cmd_sweep(const RunConfig& cfg);
SweepTable cmd_converge(const RunConfig& cfg);
BenchTable cmd_bench(const RunConfig& cfg);
/// Runs the built-in hand-checked examples, printing one line each.
bool cmd_selftest(std::ostream& os);

// CSV and text I/O.

/// Two numeric comma-separated columns, optional header line (detected when
/// the first line does not parse as numbers). Errors carry 1-based line
/// numbers.
PairedSample parse_sample_csv(std::istream& in);
PairedSample read_sample_csv(const std::string& path);

/// %.17g, round-trips every finite double.
std::string format_double(double x);

void write_sweep_csv(std::ostream& os, const SweepTable& table);
SweepTable parse_sweep_csv(std::istream& in);
void write_reports_csv(std::ostream& os, const std::vector<EstimatorReport>& reports);
void write_bench_csv(std::ostream& os, const BenchTable& table);

nlohmann::ordered_json to_json(const EstimatorReport& r);
nlohmann::ordered_json to_json(const SweepRow& r);
nlohmann::ordered_json to_json(const BenchRow& r);

/// {config, results[], version} with stable key order.
nlohmann::ordered_json document(const RunConfig& cfg, nlohmann::ordered_json results);

/// Runs `count` tasks on `threads` workers. Task i must write only to slot i
/// of its output; completion order never shows in results.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task);

/// Process entry point; returns an ExitCode.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace localdep::cli
