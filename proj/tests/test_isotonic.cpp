// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cir/curve.hpp"
#include "cir/errors.hpp"
#include "cir/isotonic.hpp"
#include "oracles.hpp"

using namespace cir;

namespace {

std::set<double> unique_values(const std::vector<double>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("data validation names the violated field") {
  CHECK_THROWS_WITH_AS(DoseResponseData({2, 1}, {0.1, 0.2}, {5, 5}),
                       doctest::Contains("x:"), ValidationError);
  CHECK_THROWS_WITH_AS(DoseResponseData({1, 2}, {0.1, 1.2}, {5, 5}),
                       doctest::Contains("y:"), ValidationError);
  CHECK_THROWS_WITH_AS(DoseResponseData({1, 2}, {0.2, 0.2}, {5, 0}),
                       doctest::Contains("n:"), ValidationError);
  CHECK_THROWS_WITH_AS(DoseResponseData({1, 2}, {0.1, 0.33}, {5, 5}),
                       doctest::Contains("y:"), ValidationError);  // 5*0.33 not a tally
}

TEST_CASE("pava: no violation returns input unchanged") {
  DoseResponseData d({1, 2, 3}, {0.1, 0.2, 0.3}, {10, 10, 10});
  auto fit = pava(d);
  CHECK(fit.fs == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(fit.xs == d.x);
  CHECK(fit.ns == d.n);
}

TEST_CASE("pava: two-point violation pools to the weighted mean") {
  DoseResponseData d({1, 2}, {0.6, 0.2}, {10, 30});
  auto fit = pava(d);
  CHECK(fit.fs[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.fs[1] == doctest::Approx(0.3).epsilon(1e-12));
  // brute-force projection agrees
  auto oracle = cir::testing::brute_force_isotonic(d.y, d.n);
  CHECK(fit.fs[0] == doctest::Approx(oracle[0]).epsilon(1e-12));
}

TEST_CASE("pava: pools only the violating tail") {
  DoseResponseData d({1, 2, 3}, {0.2, 0.4, 0.3}, {10, 10, 10});
  auto fit = pava(d);
  CHECK(fit.fs == std::vector<double>{0.2, 0.35, 0.35});
  auto oracle = cir::testing::brute_force_isotonic(d.y, d.n);
  for (int j = 0; j < 3; ++j)
    CHECK(fit.fs[j] == doctest::Approx(oracle[j]).epsilon(1e-12));
}

TEST_CASE("cir: interior pooling produces a shrinkage point and a synthetic boundary") {
  DoseResponseData d({1, 2, 3}, {0.2, 0.4, 0.3}, {10, 10, 10});
  auto fit = cir_fit(d, true);
  REQUIRE(fit.xs.size() == 3);
  CHECK(fit.xs == std::vector<double>{1, 2.5, 3});
  CHECK(fit.fs == std::vector<double>{0.2, 0.35, 0.35});
  CHECK(fit.ns == std::vector<double>{10, 20, 0});
  CHECK(fit.synthetic == std::vector<char>{0, 0, 1});
}

TEST_CASE("cir: runs of exact zeros are not treated as violations") {
  DoseResponseData d({1, 2, 3}, {0, 0, 0.3}, {10, 10, 10});
  auto fit = cir_fit(d, true);
  REQUIRE(fit.xs.size() == 3);
  CHECK(fit.fs == d.y);
  CHECK(fit.xs == d.x);
}

TEST_CASE("cir: interior tie in (0,1) is pooled under strict mode") {
  DoseResponseData d({1, 2, 3}, {0.1, 0.3, 0.3}, {10, 10, 10});
  auto fit = cir_fit(d, true);
  REQUIRE(fit.xs.size() == 3);
  CHECK(fit.xs == std::vector<double>{1, 2.5, 3});
  CHECK(fit.fs == std::vector<double>{0.1, 0.3, 0.3});
  CHECK(fit.ns == std::vector<double>{10, 20, 0});
  // unique values match PAVA's when the tie counts as a violation
  auto p = pava(d);
  CHECK(unique_values(fit.fs) == unique_values(p.fs));
}

TEST_CASE("cir: non-strict mode leaves interior ties alone") {
  DoseResponseData d({1, 2, 3}, {0.1, 0.3, 0.3}, {10, 10, 10});
  auto fit = cir_fit(d, false);
  CHECK(fit.fs == d.y);
}

TEST_CASE("m = 1 input is returned unchanged by both methods") {
  DoseResponseData d({2}, {0.4}, {10});
  CHECK(pava(d).fs == std::vector<double>{0.4});
  auto fit = cir_fit(d);
  CHECK(fit.fs == std::vector<double>{0.4});
  CHECK(fit.xs == std::vector<double>{2});
}

TEST_CASE("strictly increasing y is bit-identical through both methods") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<double> x(m), events(m), trials(m);
    std::set<int> picks;
    while (static_cast<int>(picks.size()) < m)
      picks.insert(std::uniform_int_distribution<int>(0, 10)(rng));
    int j = 0;
    for (int e : picks) {
      x[j] = j + 1.0;
      events[j] = e;
      trials[j] = 10;
      ++j;
    }
    auto d = DoseResponseData::from_counts(x, events, trials);
    CHECK(pava(d).fs == d.y);
    auto fit = cir_fit(d, true);
    CHECK(fit.fs == d.y);
    CHECK(fit.xs == d.x);
  }
}

TEST_CASE("pava matches the brute-force oracle on random instances") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    auto d = cir::testing::random_instance(rng);
    auto fit = pava(d);
    auto oracle = cir::testing::brute_force_isotonic(d.y, d.n);
    for (std::size_t j = 0; j < d.size(); ++j)
      CHECK(std::abs(fit.fs[j] - oracle[j]) < 1e-9);
  }
}

TEST_CASE("pava is independent of violation-resolution order") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    auto d = cir::testing::random_instance(rng);
    auto fit = pava(d);
    auto alt = cir::testing::pava_max_index(d.y, d.n);
    for (std::size_t j = 0; j < d.size(); ++j)
      CHECK(std::abs(fit.fs[j] - alt[j]) < 1e-12);
  }
}

TEST_CASE("cir invariants on random instances") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 500; ++trial) {
    auto d = cir::testing::random_instance(rng);
    auto p = pava(d);
    auto c = cir_fit(d, true);

    // unique estimate values identical to PAVA's, exactly
    CHECK(unique_values(c.fs) == unique_values(p.fs));

    // xs strictly increasing, fs nondecreasing
    for (std::size_t j = 0; j + 1 < c.xs.size(); ++j) {
      CHECK(c.xs[j] < c.xs[j + 1]);
      CHECK(c.fs[j] <= c.fs[j + 1]);
    }
    // strictly increasing on non-synthetic interior except 0/1 runs
    for (std::size_t j = 0; j + 1 < c.xs.size(); ++j) {
      if (c.synthetic[j] || c.synthetic[j + 1]) continue;
      if (c.fs[j] == 0.0 || c.fs[j] == 1.0) continue;
      CHECK(c.fs[j] < c.fs[j + 1]);
    }
    // range preserved; synthetic points carry zero weight
    CHECK(c.xs.front() == d.x.front());
    CHECK(c.xs.back() == d.x.back());
    double n_sum = 0;
    for (std::size_t j = 0; j < c.xs.size(); ++j) {
      if (c.synthetic[j]) {
        CHECK(c.ns[j] == 0.0);
      } else {
        CHECK(c.ns[j] >= 1.0);
        n_sum += c.ns[j];
      }
    }
    CHECK(n_sum == d.total_n());

    // mass conservation via exact integer reconstruction
    double mass = 0;
    for (std::size_t j = 0; j < c.xs.size(); ++j) {
      if (c.synthetic[j]) continue;
      const double contrib = c.ns[j] * c.fs[j];
      const double rounded = std::round(contrib);
      CHECK(std::abs(contrib - rounded) < 1e-6);
      mass += rounded;
    }
    CHECK(mass == d.total_events());

    // pooled shrinkage points sit strictly inside the doses they absorbed
    std::size_t raw = 0;
    for (std::size_t j = 0; j < c.xs.size(); ++j) {
      if (c.synthetic[j]) continue;
      // reconstruct the span from pooled weight (weights are all integers)
      double w = c.ns[j];
      double lo = d.x[raw], acc = 0;
      std::size_t end = raw;
      while (acc < w) acc += d.n[end++];
      double hi = d.x[end - 1];
      if (end - raw > 1) {
        CHECK(c.xs[j] > lo);
        CHECK(c.xs[j] < hi);
      }
      raw = end;
    }
  }
}

TEST_CASE("bias_optimal_weights") {
  auto w = bias_optimal_weights(0.5, 0.5, 10, 10);
  CHECK(w.a == doctest::Approx(0.5));
  CHECK(w.b == doctest::Approx(0.5));

  w = bias_optimal_weights(0.5, 0.5, 10, 30);
  CHECK(w.a == doctest::Approx(0.25));
  CHECK(w.b == doctest::Approx(0.75));

  w = bias_optimal_weights(0.2, 0.5, 10, 10);
  CHECK(w.b / w.a == doctest::Approx(0.64));
  CHECK(w.a == doctest::Approx(1.0 / 1.64));
  CHECK(w.a + w.b == doctest::Approx(1.0));

  CHECK_THROWS_AS(bias_optimal_weights(0.0, 0.5, 10, 10),
                  DegenerateVarianceError);
  CHECK_THROWS_AS(bias_optimal_weights(0.5, 1.0, 10, 10),
                  DegenerateVarianceError);
}

TEST_CASE("bias weights decorrelate the average from the difference") {
  // Monte-Carlo check of the defining covariance identity.
  std::mt19937_64 rng(99);
  const double f1 = 0.2, f2 = 0.5;
  const int n1 = 10, n2 = 10;
  auto w = bias_optimal_weights(f1, f2, n1, n2);
  std::binomial_distribution<int> b1(n1, f1), b2(n2, f2);
  const int draws = 200000;
  double sa = 0, sd = 0, sad = 0, saa = 0, sdd = 0;
  for (int i = 0; i < draws; ++i) {
    const double y1 = static_cast<double>(b1(rng)) / n1;
    const double y2 = static_cast<double>(b2(rng)) / n2;
    const double avg = w.a * y1 + w.b * y2;
    const double diff = y2 - y1;
    sa += avg; sd += diff; sad += avg * diff;
    saa += avg * avg; sdd += diff * diff;
  }
  const double cov = sad / draws - (sa / draws) * (sd / draws);
  const double va = saa / draws - (sa / draws) * (sa / draws);
  const double vd = sdd / draws - (sd / draws) * (sd / draws);
  CHECK(std::abs(cov / std::sqrt(va * vd)) < 0.02);
}

TEST_CASE("cir_reweighted: monotone input converges immediately to cir") {
  DoseResponseData d({1, 2, 3}, {0.1, 0.2, 0.3}, {10, 10, 10});
  auto fit = cir_reweighted(d);
  CHECK(fit.converged);
  CHECK(fit.fs == d.y);
  CHECK(fit.method == FitMethod::CIRReweighted);
}

TEST_CASE("cir_reweighted: pooled estimate moves toward the lower-variance point") {
  DoseResponseData d({1, 2, 3}, {0.2, 0.4, 0.3}, {10, 10, 10});
  auto fit = cir_reweighted(d, 50, 1e-10);
  CHECK(fit.converged);
  REQUIRE(fit.xs.size() == 3);
  // Fixed point of the plug-in scheme, hand-iterated: pooled value ~0.3520,
  // above the n-weighted 0.35.
  CHECK(fit.fs[1] > 0.35);
  CHECK(fit.fs[1] == doctest::Approx(0.3520).epsilon(2e-3));
  // raw sample sizes still reported
  CHECK(fit.ns == std::vector<double>{10, 20, 0});
}

TEST_CASE("cir_reweighted: degenerate 0/1 data falls back to n-weights") {
  // the pooled estimate is flat, so the plug-in weights stay proportional
  // to the sample sizes and reweighting is a fixed point immediately
  DoseResponseData d({1, 2, 3, 4}, {1, 1, 0, 0}, {5, 5, 5, 5});
  auto fit = cir_reweighted(d);
  auto plain = cir_fit(d, true);
  CHECK(fit.fs == plain.fs);
  CHECK(fit.xs == plain.xs);
  CHECK(fit.converged);
}

TEST_CASE("cir_reweighted validates its controls") {
  DoseResponseData d({1, 2}, {0.2, 0.4}, {5, 5});
  CHECK_THROWS_AS(cir_reweighted(d, 0, 1e-6), ValidationError);
  CHECK_THROWS_AS(cir_reweighted(d, 5, 0.0), ValidationError);
}
