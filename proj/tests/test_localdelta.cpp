#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "localdep/localdelta.hpp"

using namespace localdep;

TEST_CASE("deviation_matrix examples") {
  const PairedSample two({0, 1}, {0, 1});
  const auto narrow = deviation_matrix(two, 0.5);
  CHECK(narrow(0, 1) == 0);
  CHECK(narrow(1, 0) == 0);
  CHECK_FALSE(narrow.in_window(0, 1));

  const auto wide = deviation_matrix(two, 2.0);
  CHECK(wide(0, 0) == 0);
  CHECK(wide(0, 1) == 1);
  CHECK(wide(1, 0) == 1);
  CHECK(wide(1, 1) == 0);

  const auto equal_y = deviation_matrix(PairedSample({0, 0}, {5, 5}), 3.0);
  CHECK(equal_y(0, 1) == 0);
  CHECK(equal_y.in_window(0, 1));

  CHECK_THROWS_AS(deviation_matrix(two, 0.0), PreconditionError);
  CHECK_THROWS_AS(deviation_matrix(two, -1.0), PreconditionError);
}

TEST_CASE("strict window: |dx| == delta is excluded") {
  const auto m = deviation_matrix(PairedSample({0, 1}, {0, 3}), 1.0);
  CHECK_FALSE(m.in_window(0, 1));
}

TEST_CASE("row_means and scalar_mean") {
  const auto w = row_means(deviation_matrix(PairedSample({0, 1}, {0, 1}), 2.0));
  REQUIRE(w.means[0]);
  CHECK(*w.means[0] == 1);
  CHECK(*w.means[1] == 1);
  CHECK(w.neighbor_counts == std::vector<std::size_t>{1, 1});
  CHECK(scalar_mean(w) == 1);

  const auto empty = row_means(deviation_matrix(PairedSample({0, 1, 2}, {0, 1, 2}), 0.5));
  for (const auto& m : empty.means) {
    CHECK_FALSE(m);
  }
  CHECK_THROWS_WITH_AS(scalar_mean(empty), "no δ-neighbors at this scale", PreconditionError);

  const auto three = row_means(deviation_matrix(PairedSample({0, 0.1, 0.2}, {0, 1, 0}), 0.15));
  CHECK(*three.means[0] == 1);
  CHECK(*three.means[1] == 1);
  CHECK(*three.means[2] == 1);
  CHECK(three.neighbor_counts == std::vector<std::size_t>{1, 2, 1});

  RowMeanVector partial;
  partial.means = {1.0, std::nullopt, 3.0};
  partial.neighbor_counts = {1, 0, 1};
  CHECK(scalar_mean(partial) == 2);
}

TEST_CASE("adjacent_l1 examples") {
  CHECK(adjacent_l1(PairedSample({1, 2, 3}, {1, 3, 2}), 0) == 1.5);
  CHECK(adjacent_l1(PairedSample({1, 2, 3}, {4, 4, 4}), 0) == 0);
  CHECK(adjacent_l1(PairedSample({1, 2, 3}, {1, 2, 3}), 0) == 1);
}

namespace {

PairedSample random_sample(Rng& rng, std::size_t n) {
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform() * 4;
    ys[i] = rng.uniform() * 2 - 1;
  }
  return PairedSample(xs, ys);
}

}  // namespace

TEST_CASE("deviation_matrix properties") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const PairedSample s = random_sample(rng, n);
    const double d1 = 0.05 + rng.uniform();
    const double d2 = d1 + rng.uniform();
    const auto m1 = deviation_matrix(s, d1);
    const auto m2 = deviation_matrix(s, d2);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(m1(i, i) == 0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(m1(i, j) == m1(j, i));
        CHECK(m1(i, j) <= m2(i, j));
        const bool inside = i != j && std::abs(s.xs()[i] - s.xs()[j]) < d1;
        CHECK(m1.in_window(i, j) == inside);
        CHECK(m1(i, j) == (inside ? std::abs(s.ys()[i] - s.ys()[j]) : 0.0));
      }
    }

    // δ beyond the x-range: every row is the unmasked mean over j ≠ i.
    const auto w = row_means(deviation_matrix(s, 10.0));
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) sum += std::abs(s.ys()[i] - s.ys()[j]);
      }
      CHECK(*w.means[i] == doctest::Approx(sum / (n - 1)).epsilon(1e-14));
    }

    // Streaming path is bit-identical to the matrix pipeline.
    const double delta = 0.1 + rng.uniform();
    double via_matrix = 0;
    bool matrix_ok = true;
    try {
      via_matrix = scalar_mean(row_means(deviation_matrix(s, delta)));
    } catch (const PreconditionError&) {
      matrix_ok = false;
    }
    if (matrix_ok) {
      CHECK(local_delta_mean(s, delta) == via_matrix);
    } else {
      CHECK_THROWS_AS(local_delta_mean(s, delta), PreconditionError);
    }
  }
}

TEST_CASE("adjacent_l1 is invariant under increasing x transforms") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PairedSample s = random_sample(rng, 2 + rng.below(50));
    std::vector<double> tx;
    for (double x : s.xs()) tx.push_back(std::log1p(x) * 5 - 2);
    const PairedSample t(tx, std::vector<double>(s.ys().begin(), s.ys().end()));
    CHECK(adjacent_l1(s, 1) == adjacent_l1(t, 1));
  }
}

TEST_CASE("matrix size guard") {
  std::vector<double> big(kMaxMatrixSize + 1);
  std::iota(big.begin(), big.end(), 0.0);
  CHECK_THROWS_AS(deviation_matrix(PairedSample(big, big), 1.0), PreconditionError);
}

TEST_CASE("equispaced xs: window between gap and 2*gap reproduces adjacent pairs") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    std::vector<std::size_t> slot(n);
    std::iota(slot.begin(), slot.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(slot[i], slot[rng.below(i + 1)]);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    std::vector<std::size_t> at(n);  // at[k] = index holding the k-th smallest x
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = 0.25 * static_cast<double>(slot[i]);
      ys[i] = rng.uniform();
      at[slot[i]] = i;
    }
    const PairedSample s(xs, ys);

    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = slot[i];
      if (k == 0) {
        total += std::abs(ys[i] - ys[at[1]]) / 1.0;
      } else if (k == n - 1) {
        total += std::abs(ys[i] - ys[at[n - 2]]) / 1.0;
      } else {
        total += (std::abs(ys[i] - ys[at[k - 1]]) + std::abs(ys[i] - ys[at[k + 1]])) / 2.0;
      }
    }
    CHECK(scalar_mean(row_means(deviation_matrix(s, 0.375))) == total / static_cast<double>(n));
  }
}
