#pragma once

// Rank-scale ε-neighborhoods, leave-self-out local averages of V, and the
// L¹ residual ζ together with its ε → 0 (rank-adjacent) form.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "localdep/core.hpp"

namespace localdep {

/// N_ε(i) = { j ≠ i : |u_j − u_i| ≤ ε }.
///
/// Stored compactly: the sample is sorted by (u, index) once, and each
/// neighborhood is the contiguous run of that order within ε of u_i, minus i
/// itself. Sums over a neighborhood run in this sorted order.
class EpsilonNeighborhoods {
 public:
  double epsilon() const { return epsilon_; }
  std::size_t size() const { return order_.size(); }

  /// Neighbor indices of i, ascending.
  std::vector<std::size_t> neighbors(std::size_t i) const;
  std::size_t count(std::size_t i) const { return hi_[i] - lo_[i] - 1; }

  /// Calls f(j) for every neighbor of i in (u, index) order.
  template <class F>
  void for_each_neighbor(std::size_t i, F&& f) const {
    for (std::size_t p = lo_[i]; p < hi_[i]; ++p) {
      if (order_[p] != i) {
        f(order_[p]);
      }
    }
  }

 private:
  friend EpsilonNeighborhoods neighborhoods(const UnitSquareSample& u, double epsilon);

  double epsilon_ = 0.0;
  std::vector<std::size_t> order_;  // indices sorted by (u, index)
  std::vector<std::size_t> lo_;     // window [lo_[i], hi_[i]) in order_, includes i
  std::vector<std::size_t> hi_;
};

/// One ζ evaluation. `epsilon` is empty for the rank-adjacent limit form.
struct ResidualEstimate {
  double zeta = 0.0;
  double xi = 0.0;  // always 1 − 4ζ
  std::optional<double> epsilon;
  std::size_t n = 0;
  std::size_t used = 0;     // indices with a non-empty neighborhood
  bool calibrated = false;  // v lies on the empirical PIT grid {1/n, …, 1}
};

/// O(n log n) construction. Throws PreconditionError for ε ≤ 0.
EpsilonNeighborhoods neighborhoods(const UnitSquareSample& u, double epsilon);

/// Mean of v over N_ε(i); empty when the neighborhood is empty.
std::optional<double> local_average(std::span<const double> v, const EpsilonNeighborhoods& nb,
                                    std::size_t i);

/// ζ_n(ε) = mean over non-empty neighborhoods of |V̄ᵢ(ε) − Vᵢ|. Throws
/// PreconditionError when every neighborhood is empty.
ResidualEstimate zeta_hat(const UnitSquareSample& u, double epsilon);

/// ζ with each neighborhood replaced by the predecessor and successor in
/// (u, index) order; boundary points have a single neighbor.
ResidualEstimate zeta_limit(const UnitSquareSample& u);

/// 1 − 4ζ; 4 = 1 / E|V − EV| for V ~ Unif(0, 1).
double xi_from_zeta(double zeta);

/// True when every value equals #{j : v_j ≤ v_i} / n, i.e. the values are an
/// empirical PIT of something.
bool on_pit_grid(std::span<const double> v);

}  // namespace localdep
