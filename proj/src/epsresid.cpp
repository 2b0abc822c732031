#include "localdep/epsresid.hpp"

#include <algorithm>
#include <cmath>

namespace localdep {

EpsilonNeighborhoods neighborhoods(const UnitSquareSample& u, double epsilon) {
  if (!(epsilon > 0.0) || std::isnan(epsilon)) {
    throw PreconditionError("ε must be positive");
  }
  const auto us = u.us();
  const std::size_t n = u.size();

  EpsilonNeighborhoods nb;
  nb.epsilon_ = epsilon;
  nb.order_ = detail::stable_order(us);
  nb.lo_.resize(n);
  nb.hi_.resize(n);

  // fl(u_i − u_j) is monotone in u_j, so each window is a contiguous run of
  // the sorted order and both ends only move forward.
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const double center = us[nb.order_[p]];
    while (std::abs(us[nb.order_[lo]] - center) > epsilon) {
      ++lo;
    }
    if (hi < p + 1) {
      hi = p + 1;
    }
    while (hi < n && std::abs(us[nb.order_[hi]] - center) <= epsilon) {
      ++hi;
    }
    nb.lo_[nb.order_[p]] = lo;
    nb.hi_[nb.order_[p]] = hi;
  }
  return nb;
}

std::vector<std::size_t> EpsilonNeighborhoods::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  out.reserve(count(i));
  for_each_neighbor(i, [&out](std::size_t j) { out.push_back(j); });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> local_average(std::span<const double> v, const EpsilonNeighborhoods& nb,
                                    std::size_t i) {
  const std::size_t count = nb.count(i);
  if (count == 0) {
    return std::nullopt;
  }
  double sum = 0.0;
  nb.for_each_neighbor(i, [&](std::size_t j) { sum += v[j]; });
  return sum / static_cast<double>(count);
}

double xi_from_zeta(double zeta) { return 1.0 - 4.0 * zeta; }

bool on_pit_grid(std::span<const double> v) {
  const auto n = static_cast<double>(v.size());
  const std::vector<std::size_t> ranks = max_ranks(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != static_cast<double>(ranks[i]) / n) {
      return false;
    }
  }
  return true;
}

ResidualEstimate zeta_hat(const UnitSquareSample& u, double epsilon) {
  const EpsilonNeighborhoods nb = neighborhoods(u, epsilon);
  const auto vs = u.vs();
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (const auto avg = local_average(vs, nb, i)) {
      total += std::abs(*avg - vs[i]);
      ++used;
    }
  }
  if (used == 0) {
    throw PreconditionError("ε below sample resolution");
  }
  ResidualEstimate r;
  r.zeta = total / static_cast<double>(used);
  r.xi = xi_from_zeta(r.zeta);
  r.epsilon = epsilon;
  r.n = u.size();
  r.used = used;
  r.calibrated = on_pit_grid(vs);
  return r;
}

ResidualEstimate zeta_limit(const UnitSquareSample& u) {
  const auto vs = u.vs();
  const std::size_t n = u.size();
  const std::vector<std::size_t> order = detail::stable_order(u.us());
  std::vector<double> local(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (p == 0) {
      local[order[p]] = vs[order[1]];
    } else if (p + 1 == n) {
      local[order[p]] = vs[order[p - 1]];
    } else {
      local[order[p]] = (vs[order[p - 1]] + vs[order[p + 1]]) / 2.0;
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += std::abs(local[i] - vs[i]);
  }
  ResidualEstimate r;
  r.zeta = total / static_cast<double>(n);
  r.xi = xi_from_zeta(r.zeta);
  r.n = n;
  r.used = n;
  r.calibrated = on_pit_grid(vs);
  return r;
}

}  // namespace localdep
