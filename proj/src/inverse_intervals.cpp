// SPDX-License-Identifier: Apache-2.0
#include "cir/inverse_intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cir/errors.hpp"

namespace cir {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

InverseInterval local_inverse(const PiecewiseLinearCurve& curve,
                              const IntervalBand& band, double p) {
  const auto inv = curve.invert(p);  // throws NotEstimableError
  const double xstar = inv.x;
  const auto& xs = band.x;
  const std::size_t m = xs.size();
  if (m < 2)
    throw NoIntervalError("local_inverse: need at least two design points");

  std::vector<double> est(m);
  for (std::size_t j = 0; j < m; ++j) est[j] = curve.evaluate(xs[j]);

  // Rotate the forward bounds at each design point by the local slope of the
  // design-point interpolation (the slope averaging and zero-slope widening
  // live in slope_at). The upper forward boundary bounds the dose from
  // below, the lower boundary from above.
  const PiecewiseLinearCurve grid(std::vector<double>(xs), std::move(est));
  std::vector<double> lo_j(m), up_j(m);
  for (std::size_t j = 0; j < m; ++j) {
    double slope;
    try {
      slope = grid.slope_at(xs[j], 0.0);
    } catch (const ZeroSlopeError&) {
      throw NoIntervalError("local_inverse: all point estimates identical");
    }
    const double fj = grid.ys()[j];
    lo_j[j] = xs[j] - (band.upper[j] - fj) / slope;
    up_j[j] = xs[j] + (fj - band.lower[j]) / slope;
  }

  // Read the rotated boundaries at p, interpolating along the estimate axis.
  const auto& fs = grid.ys();
  const double pq = std::clamp(p, fs.front(), fs.back());
  std::size_t j = 1;
  while (j + 1 < m && fs[j] < pq) ++j;
  const double df = fs[j] - fs[j - 1];
  const double t = df > 0 ? (pq - fs[j - 1]) / df : 0.5;
  double lower = lo_j[j - 1] + t * (lo_j[j] - lo_j[j - 1]);
  double upper = up_j[j - 1] + t * (up_j[j] - up_j[j - 1]);

  lower = std::min(xstar, std::max(xs.front(), lower));
  upper = std::max(xstar, std::min(xs.back(), upper));
  return {p, xstar, lower, upper, true, InverseMethod::Local};
}

InverseInterval global_inverse(const IntervalBand& band, double p,
                               double point_estimate) {
  const auto& x = band.x;
  const auto& lo = band.lower;
  const auto& up = band.upper;
  const std::size_t m = x.size();

  // Lower dose bound: leftmost x where the upper boundary reaches p.
  double lower;
  if (up.front() >= p) {
    lower = x.front();
  } else if (up.back() < p) {
    lower = -kInf;
  } else {
    std::size_t j = 1;
    while (up[j] < p) ++j;  // up[j-1] < p <= up[j]
    const double t = (p - up[j - 1]) / (up[j] - up[j - 1]);
    lower = x[j - 1] + t * (x[j] - x[j - 1]);
  }

  // Upper dose bound: rightmost x where the lower boundary does not exceed p.
  double upper;
  if (lo.back() <= p) {
    upper = lo.back() < p ? kInf : x.back();
  } else if (lo.front() > p) {
    upper = x.front();
  } else {
    std::size_t j = m - 1;
    while (lo[j] > p) --j;  // lo[j] <= p < lo[j+1]
    if (lo[j] == p) {
      upper = x[j];
    } else {
      const double t = (p - lo[j]) / (lo[j + 1] - lo[j]);
      upper = x[j] + t * (x[j + 1] - x[j]);
    }
  }

  const bool finite = std::isfinite(lower) && std::isfinite(upper);
  return {p, point_estimate, lower, upper, finite, InverseMethod::Global};
}

}  // namespace cir
