// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace cir::binom {

/// P(X <= k) for X ~ Binomial(n, theta), via the regularized incomplete
/// Beta identity. k < 0 yields 0; k >= n yields 1.
double cdf(double k, double n, double theta);

/// P(X = k) for X ~ Binomial(n, theta).
double pmf(double k, double n, double theta);

/// Standard normal quantile.
double normal_quantile(double p);

/// Beta(a, b) quantile.
double beta_quantile(double p, double a, double b);

}  // namespace cir::binom
