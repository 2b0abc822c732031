#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "localdep/cli.hpp"

namespace localdep::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      return fields;
    }
    start = comma + 1;
  }
}

std::optional<double> parse_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') {
    field.remove_prefix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> optional_field(std::string_view field, std::size_t line_no) {
  if (field.empty()) {
    return std::nullopt;
  }
  const auto v = parse_number(field);
  if (!v) {
    throw DataError("line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

// Quotes a free-text cell when it contains separators.
std::string text_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

PairedSample parse_sample_csv(std::istream& in) {
  std::vector<double> xs;
  std::vector<double> ys;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) {
      view.remove_prefix(3);
    }
    if (trim(view).empty()) {
      continue;
    }
    const auto fields = split(view);
    const bool is_first = first_content;
    first_content = false;
    std::optional<double> x;
    std::optional<double> y;
    if (fields.size() == 2) {
      x = parse_number(fields[0]);
      y = parse_number(fields[1]);
    }
    if (!x || !y) {
      if (is_first && line_no == 1) {
        continue;  // header
      }
      throw DataError("line " + std::to_string(line_no) +
                      ": expected two numeric comma-separated columns");
    }
    if (!std::isfinite(*x) || !std::isfinite(*y)) {
      throw DataError("line " + std::to_string(line_no) + ": non-finite value");
    }
    xs.push_back(*x);
    ys.push_back(*y);
  }
  if (xs.size() < 2) {
    throw DataError("insufficient data");
  }
  return PairedSample(std::move(xs), std::move(ys));
}

PairedSample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open input file '" + path + "'");
  }
  return parse_sample_csv(in);
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "estimator,parameter,parameter_value,n,replicates,mean,sd,reference,deviation,status,"
        "message\n";
  for (const auto& r : table.rows) {
    std::optional<double> deviation;
    if (r.mean && r.reference) {
      deviation = *r.mean - *r.reference;
    }
    os << r.estimator << ',' << r.parameter << ',' << format_double(r.parameter_value) << ','
       << r.n << ',' << r.replicates << ',' << optional_cell(r.mean) << ','
       << optional_cell(r.sd) << ',' << optional_cell(r.reference) << ','
       << optional_cell(deviation) << ',' << (r.ok ? "ok" : "failed") << ','
       << text_cell(r.message) << '\n';
  }
}

SweepTable parse_sweep_csv(std::istream& in) {
  SweepTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || trim(line).empty()) {
      continue;
    }
    // The message column is last and may be quoted; split the first ten.
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (int c = 0; c < 10; ++c) {
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos) {
        throw DataError("line " + std::to_string(line_no) + ": too few columns");
      }
      fields.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    SweepRow r;
    r.estimator = std::string(fields[0]);
    r.parameter = std::string(fields[1]);
    r.parameter_value = optional_field(fields[2], line_no).value_or(0.0);
    r.n = static_cast<std::size_t>(optional_field(fields[3], line_no).value_or(0.0));
    r.replicates = static_cast<std::size_t>(optional_field(fields[4], line_no).value_or(0.0));
    r.mean = optional_field(fields[5], line_no);
    r.sd = optional_field(fields[6], line_no);
    r.reference = optional_field(fields[7], line_no);
    r.ok = fields[9] == "ok";
    std::string message(trim(rest));
    if (message.size() >= 2 && message.front() == '"' && message.back() == '"') {
      std::string unq;
      for (std::size_t i = 1; i + 1 < message.size(); ++i) {
        if (message[i] == '"' && message[i + 1] == '"') {
          ++i;
        }
        unq += message[i];
      }
      message = unq;
    }
    r.message = message;
    table.rows.push_back(std::move(r));
  }
  return table;
}

void write_reports_csv(std::ostream& os, const std::vector<EstimatorReport>& reports) {
  os << "estimator,value,n,seed,params,warnings\n";
  for (const auto& r : reports) {
    std::string warnings;
    for (const auto& w : r.warnings) {
      warnings += (warnings.empty() ? "" : "; ") + w;
    }
    os << r.estimator << ',' << format_double(r.value) << ',' << r.n << ',' << r.seed << ','
       << text_cell(r.params.dump()) << ',' << text_cell(warnings) << '\n';
  }
}

void write_bench_csv(std::ostream& os, const BenchTable& table) {
  os << "estimator,n,seconds,value\n";
  for (const auto& r : table.rows) {
    os << r.estimator << ',' << r.n << ',' << format_double(r.seconds) << ','
       << format_double(r.value) << '\n';
  }
}

}  // namespace localdep::cli
