#pragma once

// L² residual ζ⁽²⁾ = E[(V − E[V|U])²], its normalization η⁽²⁾, and the
// variance decomposition it shares with the coefficient of determination.
// The conditioning variable is the first coordinate of the sample; neither
// estimator needs rank-scale data except the regressogram, whose cells tile
// [0, 1].

#include <cstddef>
#include <span>
#include <vector>

#include "localdep/core.hpp"

namespace localdep {

enum class ConditionalMeanMethod { knn, binned };

struct ConditionalMeanFit {
  std::vector<double> estimates;  // Ê[V | U = u_i], input order
  ConditionalMeanMethod method = ConditionalMeanMethod::knn;
  std::size_t parameter = 0;  // k or number of bins
  bool leave_one_out = false;
};

/// Population-style (divide by n) decomposition.
struct L2Report {
  double zeta2 = 0.0;    // mean (v − Ê)²
  double eta2 = 0.0;     // 1 − zeta2 / var_v
  double var_v = 0.0;
  double between = 0.0;  // variance of the fitted values
  double within = 0.0;   // == zeta2
};

/// ⌈√n⌉ and ⌈n^{1/3}⌉, the default smoothing parameters. Heuristics only.
std::size_t default_knn_k(std::size_t n);
std::size_t default_bins(std::size_t n);

/// Leave-one-out k-nearest-neighbor mean of v in u. Distance ties go to the
/// smaller index. Throws PreconditionError unless 1 ≤ k ≤ n − 1.
ConditionalMeanFit cond_mean_knn(std::span<const double> u, std::span<const double> v,
                                 std::size_t k);
ConditionalMeanFit cond_mean_knn(const PairedSample& s, std::size_t k);
ConditionalMeanFit cond_mean_knn(const UnitSquareSample& s, std::size_t k);

/// Regressogram over `bins` equal-width right-closed cells of [0, 1]
/// (cell b is (e_b, e_{b+1}] with e_b = b / bins rounded to double; the first
/// cell also holds 0). Each estimate is its cell mean including itself.
/// Throws PreconditionError unless 1 ≤ bins ≤ n, or if some u is outside
/// [0, 1].
ConditionalMeanFit cond_mean_binned(std::span<const double> u, std::span<const double> v,
                                    std::size_t bins);
ConditionalMeanFit cond_mean_binned(const PairedSample& s, std::size_t bins);
ConditionalMeanFit cond_mean_binned(const UnitSquareSample& s, std::size_t bins);

/// Cell index used by cond_mean_binned.
std::size_t bin_index(double u, std::size_t bins);

/// Throws PreconditionError ("degenerate: V constant") when var(v) is 0.
L2Report l2_report(std::span<const double> v, const ConditionalMeanFit& fit);
L2Report l2_report(const PairedSample& s, const ConditionalMeanFit& fit);
L2Report l2_report(const UnitSquareSample& s, const ConditionalMeanFit& fit);

/// Squared Pearson correlation. Throws PreconditionError on zero variance.
double r_squared_ols(const PairedSample& s);

}  // namespace localdep
