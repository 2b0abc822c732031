#pragma once

// Sample containers and the rank/ordering substrate shared by every estimator.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "localdep/errors.hpp"
#include "localdep/rng.hpp"

namespace localdep {

/// n ≥ 2 finite (x, y) observations in input order.
class PairedSample {
 public:
  /// Throws DataError on length mismatch, non-finite entries or n < 2.
  PairedSample(std::vector<double> xs, std::vector<double> ys);

  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }
  std::size_t size() const { return xs_.size(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Builds a PairedSample from rows, reporting the offending row index for
/// non-finite values ("non-finite value at row i") and "insufficient data"
/// when fewer than two rows are given.
PairedSample load_sample(std::span<const std::pair<double, double>> rows);

/// PIT-scale pairs: every coordinate in (0, 1].
class UnitSquareSample {
 public:
  /// Throws DataError if any entry falls outside (0, 1], lengths differ, or
  /// n < 2.
  UnitSquareSample(std::vector<double> us, std::vector<double> vs);

  std::span<const double> us() const { return us_; }
  std::span<const double> vs() const { return vs_; }
  std::size_t size() const { return us_.size(); }

 private:
  std::vector<double> us_;
  std::vector<double> vs_;
};

/// Rows of a PairedSample sorted by x. `permutation[k]` is the input index of
/// the k-th smallest x; `y_ordered[k]` its concomitant.
struct OrderedSample {
  std::vector<std::size_t> permutation;
  std::vector<double> y_ordered;
  Seed tie_seed = 0;
};

/// Max-ranks r_i = #{j : values_j ≤ values_i}, in input order.
std::vector<std::size_t> max_ranks(std::span<const double> values);

/// Empirical probability integral transform: u_i = #{j : x_j ≤ x_i} / n and
/// likewise for v. Ties share the larger rank (right-continuous ECDF).
UnitSquareSample empirical_pit(const PairedSample& s);

/// Stable sort by x; runs of equal x are then shuffled uniformly with a
/// stream seeded by `tie_seed`.
OrderedSample order_by_x(const PairedSample& s, Seed tie_seed);

namespace detail {

/// Fisher–Yates over each run of adjacent items for which `same(a, b)`
/// holds, drawing from one Rng seeded with `tie_seed` in run order.
template <class T, class Same>
void shuffle_runs(std::span<T> items, Same same, Seed tie_seed) {
  Rng rng(tie_seed);
  std::size_t k = 0;
  while (k < items.size()) {
    std::size_t end = k + 1;
    while (end < items.size() && same(items[end], items[k])) {
      ++end;
    }
    for (std::size_t m = end - 1; m > k; --m) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.below(m - k + 1));
      std::swap(items[m], items[pick]);
    }
    k = end;
  }
}

/// Applies the seeded tie shuffle to `perm`, which must already be sorted by
/// (key, index). Shared by every x-ordering path so they agree bit for bit.
void shuffle_tie_runs(std::span<std::size_t> perm, std::span<const double> keys, Seed tie_seed);

/// Permutation sorting `keys` by (key, index).
std::vector<std::size_t> stable_order(std::span<const double> keys);

}  // namespace detail

}  // namespace localdep
