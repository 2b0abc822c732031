#include "localdep/chatterjee.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

namespace localdep {

namespace {

// Monotone map from double to uint64; -0.0 and +0.0 share a key.
std::uint64_t order_key(double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x);
  return bits >> 63 ? ~bits : bits | (std::uint64_t{1} << 63);
}

constexpr std::uint64_t kLow32 = 0xffff'ffffULL;

// Stable counting-sort pass over [first, last) on the `bits`-wide digit at
// `low`, writing to `out`. Returns false, leaving `out` untouched, when every
// word shares the digit.
bool digit_pass(const std::uint64_t* first, const std::uint64_t* last, std::uint64_t* out,
                int low, int bits) {
  const std::size_t buckets = std::size_t{1} << bits;
  const std::size_t n = static_cast<std::size_t>(last - first);
  std::array<std::size_t, 256> next{};
  for (const std::uint64_t* w = first; w != last; ++w) {
    ++next[(*w >> low) & (buckets - 1)];
  }
  if (std::any_of(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(buckets),
                  [n](std::size_t v) { return v == n; })) {
    return false;
  }
  std::size_t offset = 0;
  for (std::size_t b = 0; b < buckets; ++b) {
    const std::size_t here = next[b];
    next[b] = offset;
    offset += here;
  }
  for (const std::uint64_t* w = first; w != last; ++w) {
    out[next[(*w >> low) & (buckets - 1)]++] = *w;
  }
  return true;
}

// Fills `words` with indices 0..n-1 ordered by (key(i), i). Each word holds
// a 32-bit slice of the key, taken from the highest bits that vary, above
// the index. The slice is radix sorted most significant digit first, so
// that the remaining passes run on buckets small enough to stay in cache;
// runs sharing a slice are then stable sorted on full keys.
template <class Key>
void sort_by_key(std::vector<std::uint64_t>& words, std::vector<std::uint64_t>& scratch,
                 std::vector<std::uint64_t>& buffer, std::size_t n, Key key) {
  const std::uint64_t first = key(0);
  std::uint64_t differ = 0;
  for (std::size_t i = 0; i < n; ++i) {
    differ |= key(i) ^ first;
  }
  const int top = differ == 0 ? 0 : 63 - std::countl_zero(differ);
  const int shift = std::max(0, top + 1 - 32);
  words.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    words[i] = ((key(i) >> shift) << 32) | i;
  }

  // Leading 8 bits of the slice, then its low 24 bits in 8-bit passes. Few
  // leading buckets keep the scatter within reach of the TLB.
  scratch.resize(n);
  if (!digit_pass(words.data(), words.data() + n, scratch.data(), 56, 8)) {
    std::copy(words.begin(), words.end(), scratch.begin());
  }
  std::size_t lo = 0;
  while (lo < n) {
    std::size_t hi = lo + 1;
    while (hi < n && (scratch[hi] >> 56) == (scratch[lo] >> 56)) {
      ++hi;
    }
    std::uint64_t* const begin = scratch.data() + lo;
    std::uint64_t* const end = scratch.data() + hi;
    if (hi - lo <= 32) {
      // Stable insertion sort on the slice.
      for (std::uint64_t* w = begin + 1; w < end; ++w) {
        const std::uint64_t v = *w;
        std::uint64_t* j = w;
        while (j > begin && (j[-1] >> 32) > (v >> 32)) {
          *j = j[-1];
          --j;
        }
        *j = v;
      }
    } else {
      buffer.resize(hi - lo);
      std::uint64_t* from = begin;
      std::uint64_t* to = buffer.data();
      for (int low = 32; low < 56; low += 8) {
        if (digit_pass(from, from + (hi - lo), to, low, 8)) {
          std::swap(from, to);
        }
      }
      if (from != begin) {
        std::copy(from, from + (hi - lo), begin);
      }
    }
    lo = hi;
  }
  words.swap(scratch);

  if (shift == 0) {
    return;
  }
  const auto by_key = [&key](std::uint64_t a, std::uint64_t b) {
    return key(a & kLow32) < key(b & kLow32);
  };
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && (words[end] >> 32) == (words[start] >> 32)) {
      ++end;
    }
    if (end - start > 1) {
      std::stable_sort(words.begin() + static_cast<std::ptrdiff_t>(start),
                       words.begin() + static_cast<std::ptrdiff_t>(end), by_key);
    }
    start = end;
  }
}

}  // namespace

namespace detail {

double xi_from_counts(std::uint64_t n, std::uint64_t numerator, DenominatorForm form,
                      unsigned __int128 tie_sum) {
  if (form == DenominatorForm::no_ties) {
    // (D − 3S) / D with both integers exact, so the quotient is the correctly
    // rounded rational; monotone data give exactly fl((n−2)/(n+1)).
    const auto d = static_cast<__int128>(n) * n - 1;
    const __int128 top = d - 3 * static_cast<__int128>(numerator);
    return static_cast<double>(top) / static_cast<double>(d);
  }
  if (tie_sum == 0) {
    throw PreconditionError("degenerate: Y constant");
  }
  const auto d = static_cast<__int128>(2 * tie_sum);
  const __int128 top = d - static_cast<__int128>(n) * numerator;
  return static_cast<double>(top) / static_cast<double>(d);
}

}  // namespace detail

namespace {

struct RankSummary {
  std::uint64_t numerator = 0;
  bool ties = false;
  unsigned __int128 tie_sum = 0;
};

// y holds concomitants in x-order.
RankSummary summarize_ranks(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());

  RankSummary out;
  std::uint64_t prev_rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto upper = std::upper_bound(sorted.begin(), sorted.end(), y[k]);
    const auto lower = std::lower_bound(sorted.begin(), sorted.end(), y[k]);
    const auto rank = static_cast<std::uint64_t>(upper - sorted.begin());
    const auto at_least = static_cast<std::uint64_t>(sorted.end() - lower);
    if (upper - lower > 1) {
      out.ties = true;
    }
    out.tie_sum += static_cast<unsigned __int128>(at_least) * (n - at_least);
    if (k > 0) {
      out.numerator += rank > prev_rank ? rank - prev_rank : prev_rank - rank;
    }
    prev_rank = rank;
  }
  return out;
}

}  // namespace

XiReport chatterjee_xi(const PairedSample& s, Seed tie_seed) {
  const OrderedSample ordered = order_by_x(s, tie_seed);
  const RankSummary summary = summarize_ranks(ordered.y_ordered);

  XiReport r;
  r.n = s.size();
  r.tie_seed = tie_seed;
  r.numerator = summary.numerator;
  r.denominator_form = summary.ties ? DenominatorForm::tie_corrected : DenominatorForm::no_ties;
  r.xi = detail::xi_from_counts(r.n, r.numerator, r.denominator_form, summary.tie_sum);
  return r;
}

XiReport chatterjee_xi_large(const PairedSample& s, Seed tie_seed) {
  XiWorkspace ws;
  return chatterjee_xi_large(s, tie_seed, ws);
}

XiReport chatterjee_xi_large(const PairedSample& s, Seed tie_seed, XiWorkspace& ws) {
  const std::size_t n = s.size();
  const auto xs = s.xs();
  const auto ys = s.ys();
  if (n > kLow32) {
    throw PreconditionError("sample too large for the sort-based path");
  }
  const auto x_key = [xs](std::size_t i) { return order_key(xs[i]); };
  const auto y_key = [ys](std::size_t i) { return order_key(ys[i]); };

  // x-order, then the shared run shuffle over equal xs.
  std::vector<std::uint64_t>& by_x = ws.by_x;
  sort_by_key(by_x, ws.scratch, ws.bucket, n, x_key);
  detail::shuffle_runs(
      std::span<std::uint64_t>(by_x),
      [&x_key](std::uint64_t a, std::uint64_t b) {
        return (a >> 32) == (b >> 32) && x_key(a & kLow32) == x_key(b & kLow32);
      },
      tie_seed);

  // Max-rank of each y, walking runs of equal y; l = #{>= y} per run.
  std::vector<std::uint64_t>& by_y = ws.by_y;
  sort_by_key(by_y, ws.scratch, ws.bucket, n, y_key);
  std::vector<std::uint32_t>& rank = ws.rank;
  rank.resize(n);
  bool ties = false;
  unsigned __int128 tie_sum = 0;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && (by_y[end] >> 32) == (by_y[start] >> 32) &&
           y_key(by_y[end] & kLow32) == y_key(by_y[start] & kLow32)) {
      ++end;
    }
    const std::uint64_t run = end - start;
    const std::uint64_t at_least = n - start;
    ties = ties || run > 1;
    tie_sum += static_cast<unsigned __int128>(run) * at_least * (n - at_least);
    for (std::size_t m = start; m < end; ++m) {
      rank[by_y[m] & kLow32] = static_cast<std::uint32_t>(end);
    }
    start = end;
  }

  std::uint64_t numerator = 0;
  std::uint32_t prev = rank[by_x[0] & kLow32];
  for (std::size_t k = 1; k < n; ++k) {
    const std::uint32_t cur = rank[by_x[k] & kLow32];
    numerator += cur > prev ? cur - prev : prev - cur;
    prev = cur;
  }

  XiReport r;
  r.n = n;
  r.tie_seed = tie_seed;
  r.numerator = numerator;
  r.denominator_form = ties ? DenominatorForm::tie_corrected : DenominatorForm::no_ties;
  r.xi = detail::xi_from_counts(n, numerator, r.denominator_form, tie_sum);
  return r;
}

}  // namespace localdep
