#include "localdep/localdelta.hpp"

#include <cmath>
#include <string>

namespace localdep {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw PreconditionError("δ must be positive");
  }
}

}  // namespace

LocalDeviationMatrix::LocalDeviationMatrix(std::size_t n, double delta)
    : n_(n), delta_(delta), entries_(n * n, 0.0), window_(n * n, 0) {}

LocalDeviationMatrix deviation_matrix(const PairedSample& s, double delta) {
  check_delta(delta);
  const std::size_t n = s.size();
  if (n > kMaxMatrixSize) {
    throw PreconditionError("deviation matrix limited to n <= " + std::to_string(kMaxMatrixSize));
  }
  const auto xs = s.xs();
  const auto ys = s.ys();
  LocalDeviationMatrix m(n, delta);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(xs[i] - xs[j]) < delta) {
        const double d = std::abs(ys[i] - ys[j]);
        m.entries_[i * n + j] = d;
        m.entries_[j * n + i] = d;
        m.window_[i * n + j] = 1;
        m.window_[j * n + i] = 1;
      }
    }
  }
  return m;
}

RowMeanVector row_means(const LocalDeviationMatrix& m) {
  const std::size_t n = m.size();
  RowMeanVector w;
  w.means.resize(n);
  w.neighbor_counts.resize(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (m.in_window(i, j)) {
        sum += m(i, j);
        ++count;
      }
    }
    w.neighbor_counts[i] = count;
    if (count > 0) {
      w.means[i] = sum / static_cast<double>(count);
    }
  }
  return w;
}

double scalar_mean(const RowMeanVector& w) {
  double sum = 0.0;
  std::size_t present = 0;
  for (const auto& mean : w.means) {
    if (mean) {
      sum += *mean;
      ++present;
    }
  }
  if (present == 0) {
    throw PreconditionError("no δ-neighbors at this scale");
  }
  return sum / static_cast<double>(present);
}

double local_delta_mean(const PairedSample& s, double delta) {
  check_delta(delta);
  const auto xs = s.xs();
  const auto ys = s.ys();
  const std::size_t n = s.size();
  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && std::abs(xs[i] - xs[j]) < delta) {
        sum += std::abs(ys[i] - ys[j]);
        ++count;
      }
    }
    if (count > 0) {
      total += sum / static_cast<double>(count);
      ++present;
    }
  }
  if (present == 0) {
    throw PreconditionError("no δ-neighbors at this scale");
  }
  return total / static_cast<double>(present);
}

double adjacent_l1(const PairedSample& s, Seed tie_seed) {
  const OrderedSample ordered = order_by_x(s, tie_seed);
  const auto& y = ordered.y_ordered;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) {
    sum += std::abs(y[k] - y[k + 1]);
  }
  return sum / static_cast<double>(y.size() - 1);
}

}  // namespace localdep
