#include "localdep/moment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace localdep {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double mean_of(std::span<const double> values) {
  CompensatedSum s;
  for (double x : values) {
    s.add(x);
  }
  return s.value() / static_cast<double>(values.size());
}

double variance_about(std::span<const double> values, double center) {
  CompensatedSum s;
  for (double x : values) {
    const double d = x - center;
    s.add(d * d);
  }
  return s.value() / static_cast<double>(values.size());
}

void check_lengths(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw PreconditionError("predictor and response differ in length");
  }
  if (u.size() < 2) {
    throw PreconditionError("insufficient data");
  }
}

std::size_t smallest_root_at_least(std::size_t n, int power) {
  std::size_t r = 1;
  const auto reach = [power](std::size_t b) {
    std::size_t p = 1;
    for (int i = 0; i < power; ++i) {
      p *= b;
    }
    return p;
  };
  while (reach(r) < n) {
    ++r;
  }
  return r;
}

}  // namespace

std::size_t default_knn_k(std::size_t n) { return smallest_root_at_least(n, 2); }
std::size_t default_bins(std::size_t n) { return smallest_root_at_least(n, 3); }

ConditionalMeanFit cond_mean_knn(std::span<const double> u, std::span<const double> v,
                                 std::size_t k) {
  check_lengths(u, v);
  const std::size_t n = u.size();
  if (k < 1 || k > n - 1) {
    throw PreconditionError("k must lie in [1, n-1], got " + std::to_string(k));
  }
  const std::vector<std::size_t> order = detail::stable_order(u);
  ConditionalMeanFit fit;
  fit.method = ConditionalMeanMethod::knn;
  fit.parameter = k;
  fit.leave_one_out = true;
  fit.estimates.resize(n);

  std::vector<std::size_t> boundary;
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    const double center = u[i];
    const auto dist = [&](std::size_t q) { return std::abs(u[order[q]] - center); };

    // Distance of the k-th nearest neighbor, by merging both sides.
    std::size_t left = p;       // next candidate is left - 1
    std::size_t right = p + 1;  // next candidate is right
    double kth = 0.0;
    for (std::size_t taken = 0; taken < k; ++taken) {
      const bool has_left = left > 0;
      const bool has_right = right < n;
      if (has_left && (!has_right || dist(left - 1) <= dist(right))) {
        kth = dist(--left);
      } else {
        kth = dist(right++);
      }
    }

    // Everything strictly closer than kth is in; distance ties at kth are
    // resolved by index.
    std::size_t lo = p;
    while (lo > 0 && dist(lo - 1) < kth) {
      --lo;
    }
    std::size_t hi = p + 1;
    while (hi < n && dist(hi) < kth) {
      ++hi;
    }
    double sum = 0.0;
    std::size_t inside = 0;
    for (std::size_t q = lo; q < hi; ++q) {
      if (q != p) {
        sum += v[order[q]];
        ++inside;
      }
    }
    boundary.clear();
    for (std::size_t q = lo; q > 0 && dist(q - 1) == kth; --q) {
      boundary.push_back(order[q - 1]);
    }
    for (std::size_t q = hi; q < n && dist(q) == kth; ++q) {
      boundary.push_back(order[q]);
    }
    std::sort(boundary.begin(), boundary.end());
    for (std::size_t b = 0; inside < k; ++b) {
      sum += v[boundary[b]];
      ++inside;
    }
    fit.estimates[i] = sum / static_cast<double>(k);
  }
  return fit;
}

ConditionalMeanFit cond_mean_knn(const PairedSample& s, std::size_t k) {
  return cond_mean_knn(s.xs(), s.ys(), k);
}

ConditionalMeanFit cond_mean_knn(const UnitSquareSample& s, std::size_t k) {
  return cond_mean_knn(s.us(), s.vs(), k);
}

std::size_t bin_index(double u, std::size_t bins) {
  const auto edge = [bins](std::size_t b) {
    return static_cast<double>(b) / static_cast<double>(bins);
  };
  auto b = static_cast<std::size_t>(std::max(0.0, std::ceil(u * static_cast<double>(bins)) - 1.0));
  b = std::min(b, bins - 1);
  while (b > 0 && u <= edge(b)) {
    --b;
  }
  while (b + 1 < bins && u > edge(b + 1)) {
    ++b;
  }
  return b;
}

ConditionalMeanFit cond_mean_binned(std::span<const double> u, std::span<const double> v,
                                    std::size_t bins) {
  check_lengths(u, v);
  const std::size_t n = u.size();
  if (bins < 1 || bins > n) {
    throw PreconditionError("bins must lie in [1, n], got " + std::to_string(bins));
  }
  std::vector<std::size_t> cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(u[i] >= 0.0 && u[i] <= 1.0)) {
      throw PreconditionError("regressogram predictor outside [0, 1] at row " + std::to_string(i));
    }
    cell[i] = bin_index(u[i], bins);
  }
  std::vector<CompensatedSum> sums(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sums[cell[i]].add(v[i]);
    ++counts[cell[i]];
  }
  ConditionalMeanFit fit;
  fit.method = ConditionalMeanMethod::binned;
  fit.parameter = bins;
  fit.leave_one_out = false;
  fit.estimates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.estimates[i] = sums[cell[i]].value() / static_cast<double>(counts[cell[i]]);
  }
  return fit;
}

ConditionalMeanFit cond_mean_binned(const PairedSample& s, std::size_t bins) {
  return cond_mean_binned(s.xs(), s.ys(), bins);
}

ConditionalMeanFit cond_mean_binned(const UnitSquareSample& s, std::size_t bins) {
  return cond_mean_binned(s.us(), s.vs(), bins);
}

L2Report l2_report(std::span<const double> v, const ConditionalMeanFit& fit) {
  if (fit.estimates.size() != v.size()) {
    throw PreconditionError("fit and sample differ in length");
  }
  const double v_mean = mean_of(v);
  L2Report r;
  r.var_v = variance_about(v, v_mean);
  if (!(r.var_v > 0.0)) {
    throw PreconditionError("degenerate: V constant");
  }
  CompensatedSum residual;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - fit.estimates[i];
    residual.add(d * d);
  }
  r.zeta2 = residual.value() / static_cast<double>(v.size());
  r.within = r.zeta2;
  r.between = variance_about(fit.estimates, mean_of(fit.estimates));
  r.eta2 = 1.0 - r.zeta2 / r.var_v;
  return r;
}

L2Report l2_report(const PairedSample& s, const ConditionalMeanFit& fit) {
  return l2_report(s.ys(), fit);
}

L2Report l2_report(const UnitSquareSample& s, const ConditionalMeanFit& fit) {
  return l2_report(s.vs(), fit);
}

double r_squared_ols(const PairedSample& s) {
  const auto xs = s.xs();
  const auto ys = s.ys();
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  CompensatedSum sxx;
  CompensatedSum syy;
  CompensatedSum sxy;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  if (!(sxx.value() > 0.0) || !(syy.value() > 0.0)) {
    throw PreconditionError("zero variance");
  }
  return (sxy.value() / sxx.value()) * (sxy.value() / syy.value());
}

}  // namespace localdep
