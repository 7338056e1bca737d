// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cir/isotonic.hpp"

namespace cir {

/// Piecewise-linear monotone curve over [first knot x, last knot x].
/// No extrapolation: queries outside the domain throw DomainError.
class PiecewiseLinearCurve {
 public:
  PiecewiseLinearCurve(std::vector<double> xs, std::vector<double> ys);

  static PiecewiseLinearCurve from_fit(const MonotoneFit& fit);

  double evaluate(double x) const;

  struct InverseResult {
    double x;
    bool ambiguous;  // p attained on a flat stretch; x is its midpoint
  };

  /// Dose at which the curve attains p. Throws NotEstimableError when p is
  /// outside [min y, max y].
  InverseResult invert(double p) const;

  /// Slope near x: the containing segment's slope, or at a knot the mean of
  /// the adjoining segment slopes. If that is <= min_slope the window widens
  /// by one knot per side (clipped at the domain ends) and the chord slope is
  /// returned, until it exceeds min_slope or the window spans the domain.
  /// Throws ZeroSlopeError when all knot values are identical.
  double slope_at(double x, double min_slope = 0.0) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  double y_min() const { return ys_.front(); }
  double y_max() const { return ys_.back(); }

 private:
  std::vector<double> xs_, ys_;
};

inline PiecewiseLinearCurve curve_from_fit(const MonotoneFit& fit) {
  return PiecewiseLinearCurve::from_fit(fit);
}

}  // namespace cir
