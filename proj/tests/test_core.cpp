#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "localdep/core.hpp"

using namespace localdep;

TEST_CASE("load_sample preserves order and validates") {
  const std::vector<std::pair<double, double>> rows{{1, 2}, {3, 4}};
  const PairedSample s = load_sample(rows);
  CHECK(s.size() == 2);
  CHECK(s.xs()[1] == 3);
  CHECK(s.ys()[0] == 2);

  const std::vector<std::pair<double, double>> nan_row{{1, std::nan("")}};
  CHECK_THROWS_WITH_AS(load_sample(nan_row), "non-finite value at row 0", DataError);

  const std::vector<std::pair<double, double>> one{{0, 0}};
  CHECK_THROWS_WITH_AS(load_sample(one), "insufficient data", DataError);

  const std::vector<std::pair<double, double>> inf_later{
      {0, 0}, {1, 1}, {std::numeric_limits<double>::infinity(), 2}};
  CHECK_THROWS_WITH_AS(load_sample(inf_later), "non-finite value at row 2", DataError);
}

TEST_CASE("UnitSquareSample rejects values outside (0, 1]") {
  CHECK_NOTHROW(UnitSquareSample({0.5, 1.0}, {1.0, 0.25}));
  CHECK_THROWS_AS(UnitSquareSample({0.0, 1.0}, {1.0, 0.5}), DataError);
  CHECK_THROWS_AS(UnitSquareSample({0.5, 1.5}, {1.0, 0.5}), DataError);
  CHECK_THROWS_AS(UnitSquareSample({0.5}, {0.5}), DataError);
}

TEST_CASE("empirical_pit uses max-rank ECDF counts") {
  SUBCASE("distinct") {
    const UnitSquareSample u = empirical_pit(PairedSample({10, 20, 30}, {3, 1, 2}));
    CHECK(u.us()[0] == 1.0 / 3);
    CHECK(u.us()[1] == 2.0 / 3);
    CHECK(u.us()[2] == 1.0);
    CHECK(u.vs()[0] == 1.0);
    CHECK(u.vs()[1] == 1.0 / 3);
    CHECK(u.vs()[2] == 2.0 / 3);
  }
  SUBCASE("tied x share the larger rank") {
    const UnitSquareSample u = empirical_pit(PairedSample({5, 5}, {1, 2}));
    CHECK(u.us()[0] == 1.0);
    CHECK(u.us()[1] == 1.0);
    CHECK(u.vs()[0] == 0.5);
    CHECK(u.vs()[1] == 1.0);
  }
  SUBCASE("strictly increasing xs map to k/n") {
    const std::size_t n = 17;
    std::vector<double> xs(n);
    std::vector<double> ys(n, 1.0);
    std::iota(xs.begin(), xs.end(), -3.0);
    const UnitSquareSample u = empirical_pit(PairedSample(xs, ys));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(u.us()[i] == static_cast<double>(i + 1) / n);
      CHECK(u.vs()[i] == 1.0);
    }
  }
}

TEST_CASE("empirical_pit properties on random data") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(80);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rng.uniform() * 10 - 5;
      ys[i] = std::floor(rng.uniform() * 6);  // ties in y
    }
    const PairedSample s(xs, ys);
    const UnitSquareSample u = empirical_pit(s);

    // Entries live on {1/n, ..., 1}; distinct xs give a permutation of it.
    std::vector<double> sorted(u.us().begin(), u.us().end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(sorted[i] == static_cast<double>(i + 1) / n);
    }
    for (double v : u.vs()) {
      const double scaled = v * n;
      CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
    }

    // Strictly increasing transforms leave the output bit-identical.
    std::vector<double> tx(n);
    std::vector<double> ty(n);
    for (std::size_t i = 0; i < n; ++i) {
      tx[i] = std::exp(xs[i]) * 3 + 1;
      ty[i] = ys[i] * ys[i] * ys[i] - 7;
    }
    const UnitSquareSample ut = empirical_pit(PairedSample(tx, ty));
    CHECK(std::equal(u.us().begin(), u.us().end(), ut.us().begin()));
    CHECK(std::equal(u.vs().begin(), u.vs().end(), ut.vs().begin()));
  }
}

TEST_CASE("order_by_x sorts with concomitants") {
  const OrderedSample o = order_by_x(PairedSample({3, 1, 2}, {30, 10, 20}), 99);
  CHECK(o.y_ordered == std::vector<double>{10, 20, 30});
  CHECK(o.permutation == std::vector<std::size_t>{1, 2, 0});
  CHECK(o.tie_seed == 99);

  const OrderedSample id = order_by_x(PairedSample({1, 2, 3, 4}, {4, 3, 2, 1}), 5);
  CHECK(id.permutation == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("order_by_x tie-break is seeded and deterministic") {
  const PairedSample tied({1, 1}, {7, 8});
  bool saw_swap = false;
  bool saw_identity = false;
  for (Seed seed = 0; seed < 64; ++seed) {
    const auto a = order_by_x(tied, seed);
    const auto b = order_by_x(tied, seed);
    CHECK(a.permutation == b.permutation);
    CHECK(a.y_ordered == b.y_ordered);
    saw_swap = saw_swap || a.y_ordered[0] == 8;
    saw_identity = saw_identity || a.y_ordered[0] == 7;
  }
  CHECK(saw_swap);
  CHECK(saw_identity);

  // Distinct xs: seed has no effect.
  const PairedSample distinct({0.3, -1, 2, 0.1}, {1, 2, 3, 4});
  CHECK(order_by_x(distinct, 1).permutation == order_by_x(distinct, 12345).permutation);
}

TEST_CASE("order_by_x output is a non-decreasing bijection") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = static_cast<double>(rng.below(5));
      ys[i] = rng.uniform();
    }
    const PairedSample s(xs, ys);
    const OrderedSample o = order_by_x(s, trial);
    std::vector<std::size_t> seen = o.permutation;
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(seen[i] == i);
      CHECK(o.y_ordered[i] == ys[o.permutation[i]]);
      if (i > 0) {
        CHECK(xs[o.permutation[i - 1]] <= xs[o.permutation[i]]);
      }
    }
  }
}

TEST_CASE("tie shuffle is uniform over the run") {
  // Three tied points: each of the 6 orders should show up about equally.
  const PairedSample s({0, 0, 0}, {1, 2, 3});
  std::vector<int> counts(6, 0);
  const int trials = 6000;
  for (int t = 0; t < trials; ++t) {
    const auto y = order_by_x(s, static_cast<Seed>(t)).y_ordered;
    const int code = static_cast<int>((y[0] - 1) * 2 + (y[1] > y[2] ? 1 : 0));
    ++counts[code];
  }
  for (int c : counts) {
    CHECK(c > 850);
    CHECK(c < 1150);
  }
}
