#pragma once

// δ-localized deviations: E_δ, its row means, the scalar aggregate, and the
// adjacent-difference statistic that the δ → 0 limit reduces to.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "localdep/core.hpp"

namespace localdep {

/// Largest n accepted by the dense matrix path.
inline constexpr std::size_t kMaxMatrixSize = 20'000;

/// Dense n×n matrix with entries |y_i − y_j| where |x_i − x_j| < δ, else 0.
/// Also records the window mask, since a zero entry may be an in-window pair
/// with equal y.
class LocalDeviationMatrix {
 public:
  LocalDeviationMatrix(std::size_t n, double delta);

  std::size_t size() const { return n_; }
  double delta() const { return delta_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  /// True when j ≠ i and |x_i − x_j| < δ.
  bool in_window(std::size_t i, std::size_t j) const { return window_[i * n_ + j] != 0; }

 private:
  friend LocalDeviationMatrix deviation_matrix(const PairedSample& s, double delta);

  std::size_t n_;
  double delta_;
  std::vector<double> entries_;
  std::vector<std::uint8_t> window_;
};

struct RowMeanVector {
  std::vector<std::optional<double>> means;  // absent for empty windows
  std::vector<std::size_t> neighbor_counts;
};

/// Throws PreconditionError if δ ≤ 0 or n exceeds kMaxMatrixSize.
LocalDeviationMatrix deviation_matrix(const PairedSample& s, double delta);

/// Mean of in-window off-diagonal entries per row, summed in column order.
RowMeanVector row_means(const LocalDeviationMatrix& m);

/// Average of the present row means. Throws PreconditionError
/// ("no δ-neighbors at this scale") when every row is empty.
double scalar_mean(const RowMeanVector& w);

/// scalar_mean(row_means(deviation_matrix(s, delta))) without storing the
/// matrix; same summation order, so the result is bit-identical.
double local_delta_mean(const PairedSample& s, double delta);

/// (1/(n−1)) Σ |Y₍ᵢ₎ − Y₍ᵢ₊₁₎| over concomitants of the x-ordering.
double adjacent_l1(const PairedSample& s, Seed tie_seed);

}  // namespace localdep
