// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cir/curve.hpp"
#include "cir/intervals.hpp"

namespace cir {

enum class InverseMethod { Local, Global };

/// Confidence interval for the dose achieving response rate target_p.
/// Non-crossing boundaries in the global method leave a side infinite,
/// recorded by the +/-inf sentinel and finite = false.
struct InverseInterval {
  double target_p;
  double point;  // inverse point estimate (NaN if not supplied/found)
  double lower;
  double upper;
  bool finite;
  InverseMethod method;
};

/// Delta-method interval: at every design point the forward bounds are
/// rotated into dose space by the local slope of the design-point
/// interpolation (upper forward bound -> lower dose bound and vice versa),
/// the rotated boundaries are interpolated along the estimate axis at p,
/// and the result is clipped to the design range. Throws NoIntervalError
/// when all point estimates are identical or fewer than two design points
/// are available, NotEstimableError when p is outside the attained range.
InverseInterval local_inverse(const PiecewiseLinearCurve& curve,
                              const IntervalBand& band, double p);

/// Band-intersection interval: lower bound at the leftmost dose where the
/// interpolated upper boundary reaches p, upper bound at the rightmost dose
/// where the lower boundary still does not exceed p. A boundary that never
/// crosses p leaves that side infinite.
InverseInterval global_inverse(const IntervalBand& band, double p,
                               double point_estimate = 0.0 / 0.0);

}  // namespace cir
