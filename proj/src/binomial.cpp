// SPDX-License-Identifier: Apache-2.0
#include "cir/binomial.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

namespace cir::binom {

double cdf(double k, double n, double theta) {
  k = std::floor(k);
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (theta <= 0.0) return 1.0;
  if (theta >= 1.0) return 0.0;
  // P(X <= k) = I_{1-theta}(n-k, k+1)
  return boost::math::ibeta(n - k, k + 1.0, 1.0 - theta);
}

double pmf(double k, double n, double theta) {
  k = std::floor(k);
  if (k < 0 || k > n) return 0.0;
  if (theta <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (theta >= 1.0) return k == n ? 1.0 : 0.0;
  const double log_p = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                       std::lgamma(n - k + 1.0) + k * std::log(theta) +
                       (n - k) * std::log1p(-theta);
  return std::exp(log_p);
}

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> dist(0.0, 1.0);
  return boost::math::quantile(dist, p);
}

double beta_quantile(double p, double a, double b) {
  const boost::math::beta_distribution<double> dist(a, b);
  return boost::math::quantile(dist, p);
}

}  // namespace cir::binom
