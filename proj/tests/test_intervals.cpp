// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cir/errors.hpp"
#include "cir/intervals.hpp"
#include "oracles.hpp"

using namespace cir;

TEST_CASE("pointwise_bound frozen values at 90%") {
  // Clopper-Pearson for 5/10
  CHECK(pointwise_bound(0.5, 10, 0.90, BoundMethod::ClopperPearson,
                        Side::Lower) == doctest::Approx(0.2224).epsilon(1e-3));
  CHECK(pointwise_bound(0.5, 10, 0.90, BoundMethod::ClopperPearson,
                        Side::Upper) == doctest::Approx(0.7776).epsilon(1e-3));
  // 0/10: lower is exactly 0, upper is 1 - 0.05^(1/10)
  CHECK(pointwise_bound(0.0, 10, 0.90, BoundMethod::ClopperPearson,
                        Side::Lower) == 0.0);
  CHECK(pointwise_bound(0.0, 10, 0.90, BoundMethod::ClopperPearson,
                        Side::Upper) ==
        doctest::Approx(1.0 - std::pow(0.05, 0.1)).epsilon(1e-9));
  // Wilson for 5/10
  CHECK(pointwise_bound(0.5, 10, 0.90, BoundMethod::Wilson, Side::Lower) ==
        doctest::Approx(0.2693).epsilon(1e-3));
  CHECK(pointwise_bound(0.5, 10, 0.90, BoundMethod::Wilson, Side::Upper) ==
        doctest::Approx(0.7307).epsilon(1e-3));
}

TEST_CASE("pointwise_bound sanity across methods") {
  for (auto method : {BoundMethod::ClopperPearson, BoundMethod::Wilson,
                      BoundMethod::Jeffreys, BoundMethod::AgrestiCoull}) {
    for (double y : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      const double lo = pointwise_bound(y, 10, 0.90, method, Side::Lower);
      const double hi = pointwise_bound(y, 10, 0.90, method, Side::Upper);
      CHECK(lo >= 0.0);
      CHECK(hi <= 1.0);
      CHECK(lo < hi);
    }
    // symmetric case is symmetric around 1/2
    const double lo = pointwise_bound(0.5, 10, 0.90, method, Side::Lower);
    const double hi = pointwise_bound(0.5, 10, 0.90, method, Side::Upper);
    CHECK(lo + hi == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(
      pointwise_bound(0.5, 10, 1.5, BoundMethod::Wilson, Side::Lower),
      ValidationError);
  CHECK_THROWS_AS(
      pointwise_bound(0.5, 0, 0.9, BoundMethod::Wilson, Side::Lower),
      ValidationError);
  CHECK_THROWS_AS(
      pointwise_bound(0.5, 10, 0.9, BoundMethod::Morris, Side::Lower),
      ValidationError);
}

TEST_CASE("morris_band with one dose reduces to Clopper-Pearson") {
  for (double y : {0.0, 0.3, 0.7, 1.0}) {
    auto d = DoseResponseData({2}, {y}, {10});
    auto band = morris_band(d, 0.90);
    CHECK(band.lower[0] ==
          doctest::Approx(pointwise_bound(y, 10, 0.90,
                                          BoundMethod::ClopperPearson,
                                          Side::Lower))
              .epsilon(1e-6));
    CHECK(band.upper[0] ==
          doctest::Approx(pointwise_bound(y, 10, 0.90,
                                          BoundMethod::ClopperPearson,
                                          Side::Upper))
              .epsilon(1e-6));
  }
}

TEST_CASE("morris_band two all-negative doses, closed form") {
  // With zero events everywhere the upper chain at the bottom dose is
  // (1-theta)^(n1+n2), so its 0.05-root is 1 - 0.05^(1/20).
  DoseResponseData d({1, 2}, {0.0, 0.0}, {10, 10});
  auto band = morris_band(d, 0.90);
  CHECK(band.upper[0] ==
        doctest::Approx(1.0 - std::pow(0.05, 1.0 / 20.0)).epsilon(1e-6));
  CHECK(band.upper[1] ==
        doctest::Approx(1.0 - std::pow(0.05, 1.0 / 10.0)).epsilon(1e-6));
  CHECK(band.lower[0] == 0.0);
  CHECK(band.lower[1] == 0.0);
  // ordering information narrows the lower dose's bound
  CHECK(band.upper[0] < band.upper[1]);
}

TEST_CASE("morris_band is well-formed and monotone on random tallies") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto d = cir::testing::random_instance(rng, 5, 10);
    auto band = morris_band(d, 0.90);
    for (std::size_t j = 0; j < d.size(); ++j) {
      CHECK(band.lower[j] >= 0.0);
      CHECK(band.upper[j] <= 1.0);
      CHECK(band.lower[j] <= band.upper[j]);
      if (j > 0) {
        CHECK(band.lower[j] >= band.lower[j - 1]);
        CHECK(band.upper[j] >= band.upper[j - 1]);
      }
    }
  }
}

TEST_CASE("combined_band never widens past either ingredient") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    auto d = cir::testing::random_instance(rng, 5, 10);
    auto morris = morris_band(d, 0.90);
    auto wilson = pointwise_band(d, 0.90, BoundMethod::Wilson);
    auto comb = combined_band(d, 0.90);
    for (std::size_t j = 0; j < d.size(); ++j) {
      CHECK(comb.upper[j] <= morris.upper[j] + 1e-12);
      CHECK(comb.upper[j] <= wilson.upper[j] + 1e-12);
      CHECK(comb.lower[j] <= comb.upper[j]);
      if (j > 0) {
        CHECK(comb.lower[j] >= comb.lower[j - 1]);
        CHECK(comb.upper[j] >= comb.upper[j - 1]);
      }
    }
  }
}

TEST_CASE("band_at_x interpolates each boundary") {
  IntervalBand band;
  band.x = {1, 3};
  band.lower = {0.1, 0.3};
  band.upper = {0.4, 0.8};
  auto [lo, hi] = band_at_x(band, 2.0);
  CHECK(lo == doctest::Approx(0.2));
  CHECK(hi == doctest::Approx(0.6));
  auto at_knot = band_at_x(band, 3.0);
  CHECK(at_knot.first == 0.3);
  CHECK(at_knot.second == 0.8);
  CHECK_THROWS_AS(band_at_x(band, 0.5), DomainError);
}

TEST_CASE("allocation_inflation_factor is an exact ratio") {
  // n = 10, n_j = 4: pi = 0.4, c = 1 + 0.6/4 = 1.15 exactly
  CHECK(allocation_inflation_factor(10, 4) == 1.15);
  // equal allocation over 5 doses of 20: c = 1 + 0.8/4 = 1.2
  CHECK(allocation_inflation_factor(20, 4) == 1.2);
  // the whole sample at one dose: no inflation
  CHECK(allocation_inflation_factor(20, 20) == 1.0);
}

TEST_CASE("sequential_inflation scales half-widths around the given center") {
  IntervalBand band;
  band.x = {1, 2, 3};
  band.lower = {0.10, 0.20, 0.30};
  band.upper = {0.30, 0.50, 0.99};
  band.counts_n = {4, 0, 4};
  std::vector<double> center = {0.20, 0.35, 0.60};
  auto out = sequential_inflation(band, 10, center);
  const double s = std::sqrt(1.15);
  CHECK(out.lower[0] == doctest::Approx(0.20 - 0.10 * s).epsilon(1e-12));
  CHECK(out.upper[0] == doctest::Approx(0.20 + 0.10 * s).epsilon(1e-12));
  // n_j = 0 points are untouched
  CHECK(out.lower[1] == 0.20);
  CHECK(out.upper[1] == 0.50);
  // clipping at 1
  CHECK(out.upper[2] == 1.0);
  CHECK(out.lower[2] == doctest::Approx(0.60 - 0.30 * s).epsilon(1e-12));

  std::vector<double> short_center = {0.2, 0.3};
  CHECK_THROWS_AS(sequential_inflation(band, 10, short_center),
                  ValidationError);
}
