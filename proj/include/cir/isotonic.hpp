// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cir/dose_response.hpp"

namespace cir {

enum class FitMethod { IR, CIR, CIRReweighted };

/// Result of a monotone fit.
///
/// For IR the points sit at the original design doses. For CIR pooled
/// stretches collapse to single shrinkage points; flat points re-added at a
/// consumed range boundary are flagged `synthetic` and carry weight zero.
struct MonotoneFit {
  std::vector<double> xs;       // strictly increasing
  std::vector<double> fs;       // nondecreasing estimates
  std::vector<double> ns;       // pooled sample sizes (0 for synthetic points)
  std::vector<char> synthetic;  // boundary-extension flags
  FitMethod method = FitMethod::IR;
  bool converged = true;        // only meaningful for the reweighted variant
};

/// Weighted least-squares projection of y onto the nondecreasing cone
/// (pool-adjacent-violators). One output point per design point.
MonotoneFit pava(const DoseResponseData& data);

/// Centered isotonic regression: pooled stretches collapse to their
/// sample-size-weighted centroid. With `strict` (the default), interior ties
/// in (0,1) count as violations so the interior estimate is strictly
/// increasing; runs of exact 0s and 1s are left alone.
MonotoneFit cir_fit(const DoseResponseData& data, bool strict = true);

struct WeightPair {
  double a, b;  // a + b = 1, both positive
};

/// Convex weights (a,b) for a*Y1 + b*Y2 that make the average uncorrelated
/// with Y2 - Y1 under Binomial sampling: b/a = n2*f1*(1-f1) / (n1*f2*(1-f2)).
/// Throws DegenerateVarianceError when f1 or f2 sits on {0,1}.
WeightPair bias_optimal_weights(double f1, double f2, double n1, double n2);

/// Iterative plug-in reweighting: run CIR with sample-size weights, then
/// repeatedly re-pool with weights n_j / (F(1-F)) taken from the current
/// estimate, clamping the variance term below at 1e-4. Stops when the
/// design-point estimates move by less than `tol`, or after `max_iter`
/// passes (then `converged` is false).
MonotoneFit cir_reweighted(const DoseResponseData& data, int max_iter = 25,
                           double tol = 1e-8);

}  // namespace cir
