// SPDX-License-Identifier: Apache-2.0
#include "cir/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cir/errors.hpp"

namespace cir {

PiecewiseLinearCurve::PiecewiseLinearCurve(std::vector<double> xs,
                                           std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || xs_.size() != ys_.size())
    throw ValidationError("curve: knot vectors must be nonempty and equal-length");
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    if (!(xs_[i] < xs_[i + 1]))
      throw ValidationError("curve: knot x must be strictly increasing");
    if (ys_[i] > ys_[i + 1])
      throw ValidationError("curve: knot y must be nondecreasing");
  }
  for (double v : ys_)
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("curve: knot y must lie in [0,1]");
}

PiecewiseLinearCurve PiecewiseLinearCurve::from_fit(const MonotoneFit& fit) {
  return PiecewiseLinearCurve(fit.xs, fit.fs);
}

double PiecewiseLinearCurve::evaluate(double x) const {
  if (x < xs_.front() || x > xs_.back())
    throw DomainError("evaluate: x=" + std::to_string(x) + " outside [" +
                      std::to_string(xs_.front()) + ", " +
                      std::to_string(xs_.back()) + "]");
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  const std::size_t i = it - xs_.begin();
  if (i < xs_.size() && xs_[i] == x) return ys_[i];
  const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

PiecewiseLinearCurve::InverseResult PiecewiseLinearCurve::invert(double p) const {
  if (p < ys_.front() || p > ys_.back())
    throw NotEstimableError("invert: p=" + std::to_string(p) +
                            " outside attained range [" +
                            std::to_string(ys_.front()) + ", " +
                            std::to_string(ys_.back()) + "]");
  // Knots attaining p exactly delimit the flat stretch (if any).
  auto lo = std::lower_bound(ys_.begin(), ys_.end(), p);
  if (lo != ys_.end() && *lo == p) {
    auto hi = std::upper_bound(ys_.begin(), ys_.end(), p) - 1;
    const std::size_t i0 = lo - ys_.begin();
    const std::size_t i1 = hi - ys_.begin();
    if (i0 == i1) return {xs_[i0], false};
    return {0.5 * (xs_[i0] + xs_[i1]), true};
  }
  // Unique crossing inside a strictly increasing segment.
  const std::size_t i = lo - ys_.begin();  // ys_[i-1] < p < ys_[i]
  const double t = (p - ys_[i - 1]) / (ys_[i] - ys_[i - 1]);
  return {xs_[i - 1] + t * (xs_[i] - xs_[i - 1]), false};
}

double PiecewiseLinearCurve::slope_at(double x, double min_slope) const {
  if (x < xs_.front() || x > xs_.back())
    throw DomainError("slope_at: x outside curve domain");
  if (ys_.front() == ys_.back())
    throw ZeroSlopeError("slope_at: all point estimates are identical");

  const int last = static_cast<int>(xs_.size()) - 1;
  auto seg_slope = [&](int i) {
    return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
  };

  int lo, hi;
  double s;
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  const int i = static_cast<int>(it - xs_.begin());
  if (i <= last && xs_[i] == x) {
    if (i == 0) {
      lo = 0; hi = 1; s = seg_slope(0);
    } else if (i == last) {
      lo = last - 1; hi = last; s = seg_slope(last - 1);
    } else {
      lo = i - 1; hi = i + 1;
      s = 0.5 * (seg_slope(i - 1) + seg_slope(i));
    }
  } else {
    lo = i - 1; hi = i;
    s = seg_slope(lo);
  }

  while (s <= min_slope && (lo > 0 || hi < last)) {
    lo = std::max(lo - 1, 0);
    hi = std::min(hi + 1, last);
    s = (ys_[hi] - ys_[lo]) / (xs_[hi] - xs_[lo]);
  }
  return s;
}

}  // namespace cir
