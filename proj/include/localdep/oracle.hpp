#pragma once

// Quadratic reference implementations for differential testing.

#include <cstddef>

#include "localdep/core.hpp"

namespace localdep::oracle {

inline constexpr std::size_t kQuadraticGuard = 5'000;

/// ξ with ranks from pairwise counting. Same x-ordering as chatterjee_xi.
/// Throws PreconditionError above kQuadraticGuard unless `force`.
double xi_bruteforce(const PairedSample& s, Seed tie_seed, bool force = false);

/// ζ_n(ε) by scanning every pair. Neighbor sums run in (u, index) order and
/// the outer sum by index, matching zeta_hat.
double zeta_bruteforce(const UnitSquareSample& u, double epsilon, bool force = false);

}  // namespace localdep::oracle
