// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cir/dose_response.hpp"

namespace cir {

enum class BoundMethod {
  ClopperPearson,
  Wilson,
  Jeffreys,
  AgrestiCoull,
  Morris,
  Combined,
};

std::string to_string(BoundMethod m);

enum class Side { Lower, Upper };

/// One-sided binomial confidence bound at tail probability (1-level)/2.
double pointwise_bound(double y, double n, double level, BoundMethod method,
                       Side side);

/// Per-design-point confidence bounds. `counts_n` retains the per-point
/// sample sizes so the band can later be inflated for sequential designs.
struct IntervalBand {
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.9;
  BoundMethod method = BoundMethod::Combined;
  std::vector<double> counts_n;
};

/// Pointwise band using a single analytical method at every design point.
/// With `center` supplied, the bounds are taken around those estimates (e.g.
/// the monotone fit's values) instead of the raw per-dose proportions; the
/// per-dose sample sizes still come from the data.
IntervalBand pointwise_band(const DoseResponseData& data, double level,
                            BoundMethod method,
                            std::span<const double> center = {});

/// Ordered-binomial bounds: upper bounds from a recursion anchored at the
/// top dose by a Clopper-Pearson bound and narrowed downward through the
/// ordering; lower bounds mirror from the bottom dose upward. Bounds are
/// then tightened into nondecreasing sequences. Unbracketed roots return
/// the corresponding [0,1] boundary.
IntervalBand morris_band(const DoseResponseData& data, double level);

/// Morris bounds pointwise replaced by an analytical bound where the latter
/// is tighter, then monotonicity-tightened (uppers by right-to-left running
/// minimum, lowers by left-to-right running maximum).
IntervalBand combined_band(const DoseResponseData& data, double level,
                           BoundMethod pointwise = BoundMethod::Wilson,
                           std::span<const double> center = {});

/// Band boundaries linearly interpolated between design points.
std::pair<double, double> band_at_x(const IntervalBand& band, double x);

/// Variance inflation factor 1 + (1 - n_j/n) / n_j for a stochastic
/// dose-allocation process estimated by the observed allocation proportion.
double allocation_inflation_factor(double n_total, double n_j);

/// Scale each bound's distance from the supplied point estimate by the
/// square root of the allocation inflation factor, clipping to [0,1].
/// Points with n_j = 0 are left unchanged.
IntervalBand sequential_inflation(const IntervalBand& band, double n_total,
                                  std::span<const double> center);

}  // namespace cir
