#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "localdep/core.hpp"

namespace localdep {

enum class DenominatorForm { no_ties, tie_corrected };

/// Chatterjee's ξ_n together with its ingredients.
///
/// With r the max-ranks of the concomitants after x-ordering and
/// S = Σ |r_{i+1} − r_i|:
///   no ties in y:  ξ = 1 − 3S / (n² − 1)
///   ties in y:     ξ = 1 − nS / (2 Σ l_i (n − l_i)),  l_i = #{j : y_(j) ≥ y_(i)}
/// The second form reduces to the first when y has no ties.
struct XiReport {
  double xi = 0.0;
  std::uint64_t numerator = 0;  // S
  DenominatorForm denominator_form = DenominatorForm::no_ties;
  Seed tie_seed = 0;
  std::size_t n = 0;
};

/// Reference path built on order_by_x and max_ranks. Throws
/// PreconditionError ("degenerate: Y constant") when all y are equal.
XiReport chatterjee_xi(const PairedSample& s, Seed tie_seed);

/// Same statistic for large n: one packed sort per axis plus linear passes,
/// no intermediate OrderedSample. Bit-identical to chatterjee_xi.
XiReport chatterjee_xi_large(const PairedSample& s, Seed tie_seed);

/// Scratch buffers for chatterjee_xi_large. Reusing one across calls keeps
/// its memory mapped, so repeated large samples skip page-fault costs.
/// Contents between calls are meaningless.
struct XiWorkspace {
  std::vector<std::uint64_t> by_x;
  std::vector<std::uint64_t> by_y;
  std::vector<std::uint64_t> scratch;
  std::vector<std::uint64_t> bucket;
  std::vector<std::uint32_t> rank;
};

XiReport chatterjee_xi_large(const PairedSample& s, Seed tie_seed, XiWorkspace& ws);

namespace detail {

/// ξ from integer ingredients. `tie_sum` is Σ l_i (n − l_i), only read for
/// the tie-corrected form.
double xi_from_counts(std::uint64_t n, std::uint64_t numerator, DenominatorForm form,
                      unsigned __int128 tie_sum);

}  // namespace detail

}  // namespace localdep
