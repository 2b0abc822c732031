#include "localdep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace localdep::oracle {

namespace {

void guard(std::size_t n, bool force) {
  if (n > kQuadraticGuard && !force) {
    throw PreconditionError("quadratic oracle refused above n=" + std::to_string(kQuadraticGuard) +
                            " (pass --force-quadratic to override)");
  }
}

}  // namespace

double xi_bruteforce(const PairedSample& s, Seed tie_seed, bool force) {
  const std::size_t n = s.size();
  guard(n, force);
  const std::vector<double> y = order_by_x(s, tie_seed).y_ordered;

  std::vector<long long> r(n, 0);
  std::vector<long long> l(n, 0);
  bool ties = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j] <= y[i]) ++r[i];
      if (y[j] >= y[i]) ++l[i];
      if (j != i && y[j] == y[i]) ties = true;
    }
  }
  long long sum = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sum += std::llabs(r[i + 1] - r[i]);
  }
  const auto nn = static_cast<long long>(n);
  if (!ties) {
    const __int128 d = static_cast<__int128>(nn) * nn - 1;
    return static_cast<double>(d - 3 * static_cast<__int128>(sum)) / static_cast<double>(d);
  }
  __int128 spread = 0;
  for (std::size_t i = 0; i < n; ++i) {
    spread += static_cast<__int128>(l[i]) * (nn - l[i]);
  }
  if (spread == 0) {
    throw PreconditionError("degenerate: Y constant");
  }
  const __int128 d = 2 * spread;
  return static_cast<double>(d - static_cast<__int128>(nn) * sum) / static_cast<double>(d);
}

double zeta_bruteforce(const UnitSquareSample& u, double epsilon, bool force) {
  const std::size_t n = u.size();
  guard(n, force);
  if (!(epsilon > 0.0)) {
    throw PreconditionError("ε must be positive");
  }
  const auto us = u.us();
  const auto vs = u.vs();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return us[a] < us[b]; });

  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j : order) {
      if (j != i && std::abs(us[j] - us[i]) <= epsilon) {
        sum += vs[j];
        ++count;
      }
    }
    if (count > 0) {
      total += std::abs(sum / static_cast<double>(count) - vs[i]);
      ++used;
    }
  }
  if (used == 0) {
    throw PreconditionError("ε below sample resolution");
  }
  return total / static_cast<double>(used);
}

}  // namespace localdep::oracle
