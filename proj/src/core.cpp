#include "localdep/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace localdep {

namespace {

void check_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("non-finite value at row " + std::to_string(i));
    }
  }
}

}  // namespace

PairedSample::PairedSample(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) {
    throw DataError("xs and ys differ in length");
  }
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
      throw DataError("non-finite value at row " + std::to_string(i));
    }
  }
  if (xs_.size() < 2) {
    throw DataError("insufficient data");
  }
}

PairedSample load_sample(std::span<const std::pair<double, double>> rows) {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  for (const auto& [x, y] : rows) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return PairedSample(std::move(xs), std::move(ys));
}

UnitSquareSample::UnitSquareSample(std::vector<double> us, std::vector<double> vs)
    : us_(std::move(us)), vs_(std::move(vs)) {
  if (us_.size() != vs_.size()) {
    throw DataError("us and vs differ in length");
  }
  check_finite(us_);
  check_finite(vs_);
  for (std::size_t i = 0; i < us_.size(); ++i) {
    if (!(us_[i] > 0.0 && us_[i] <= 1.0) || !(vs_[i] > 0.0 && vs_[i] <= 1.0)) {
      throw DataError("value outside (0, 1] at row " + std::to_string(i));
    }
  }
  if (us_.size() < 2) {
    throw DataError("insufficient data");
  }
}

std::vector<std::size_t> max_ranks(std::span<const double> values) {
  const std::vector<std::size_t> order = detail::stable_order(values);
  std::vector<std::size_t> ranks(values.size());
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k + 1;
    while (end < order.size() && values[order[end]] == values[order[k]]) {
      ++end;
    }
    for (std::size_t m = k; m < end; ++m) {
      ranks[order[m]] = end;
    }
    k = end;
  }
  return ranks;
}

UnitSquareSample empirical_pit(const PairedSample& s) {
  const auto n = static_cast<double>(s.size());
  const auto to_unit = [n](std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t r : max_ranks(values)) {
      out.push_back(static_cast<double>(r) / n);
    }
    return out;
  };
  return UnitSquareSample(to_unit(s.xs()), to_unit(s.ys()));
}

OrderedSample order_by_x(const PairedSample& s, Seed tie_seed) {
  OrderedSample out;
  out.tie_seed = tie_seed;
  out.permutation = detail::stable_order(s.xs());
  detail::shuffle_tie_runs(out.permutation, s.xs(), tie_seed);
  out.y_ordered.reserve(s.size());
  for (std::size_t idx : out.permutation) {
    out.y_ordered.push_back(s.ys()[idx]);
  }
  return out;
}

namespace detail {

std::vector<std::size_t> stable_order(std::span<const double> keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [keys](std::size_t a, std::size_t b) {
    return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
  });
  return order;
}

void shuffle_tie_runs(std::span<std::size_t> perm, std::span<const double> keys, Seed tie_seed) {
  shuffle_runs(perm, [keys](std::size_t a, std::size_t b) { return keys[a] == keys[b]; }, tie_seed);
}

}  // namespace detail

}  // namespace localdep
