// SPDX-License-Identifier: Apache-2.0
#include "cir/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "cir/binomial.hpp"
#include "cir/errors.hpp"

namespace cir {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

constexpr double kRootTol = 1e-8;

// Root of a monotone function on [0,1] by bisection; `decreasing` states the
// direction of f. Unbracketed roots return the nearer boundary.
template <typename F>
double bisect_root(F f, double target, bool decreasing) {
  double f0 = f(0.0), f1 = f(1.0);
  if (decreasing) {
    if (f1 >= target) return 1.0;
    if (f0 <= target) return 0.0;
  } else {
    if (f0 >= target) return 0.0;
    if (f1 <= target) return 1.0;
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kRootTol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    const bool go_right = decreasing ? (fm > target) : (fm < target);
    if (go_right) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Upper-bound recursion: the chain anchored at the top dose. Evaluated as a
// single function of theta; each level mixes its own tail probability with
// the next level's function at the same theta.
double upper_chain(const DoseResponseData& d, std::size_t j, double theta) {
  const std::size_t m = d.size();
  double g = binom::cdf(d.counts[m - 1], d.n[m - 1], theta);
  for (std::size_t i = m - 1; i-- > j;) {
    g = binom::cdf(d.counts[i] - 1, d.n[i], theta) +
        g * binom::pmf(d.counts[i], d.n[i], theta);
  }
  return g;
}

// Mirror chain for lower bounds, anchored at the bottom dose.
double lower_chain(const DoseResponseData& d, std::size_t j, double theta) {
  double h = 1.0 - binom::cdf(d.counts[0] - 1, d.n[0], theta);
  for (std::size_t i = 1; i <= j; ++i) {
    h = (1.0 - binom::cdf(d.counts[i], d.n[i], theta)) +
        h * binom::pmf(d.counts[i], d.n[i], theta);
  }
  return h;
}

void tighten(IntervalBand& band) {
  const std::size_t m = band.x.size();
  for (std::size_t j = m - 1; j-- > 0;)
    band.upper[j] = std::min(band.upper[j], band.upper[j + 1]);
  for (std::size_t j = 1; j < m; ++j)
    band.lower[j] = std::max(band.lower[j], band.lower[j - 1]);
  // Severely order-violating data can cross the tightened bounds; keep the
  // band well-formed by pulling lowers down to the uppers.
  for (std::size_t j = 0; j < m; ++j)
    band.lower[j] = std::min(band.lower[j], band.upper[j]);
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("level: must lie in (0,1)");
}

}  // namespace

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::ClopperPearson: return "ClopperPearson";
    case BoundMethod::Wilson: return "Wilson";
    case BoundMethod::Jeffreys: return "Jeffreys";
    case BoundMethod::AgrestiCoull: return "AgrestiCoull";
    case BoundMethod::Morris: return "Morris";
    case BoundMethod::Combined: return "Combined";
  }
  return "?";
}

namespace {

// Shared bound arithmetic; `k` may be fractional when the bound is centered
// on a fitted estimate rather than a raw tally.
double bound_at_k(double k, double n, double level, BoundMethod method,
                  Side side) {
  const double q = (1.0 - level) / 2.0;  // one-sided tail probability
  const bool up = side == Side::Upper;

  switch (method) {
    case BoundMethod::ClopperPearson: {
      if (up) {
        if (k >= n) return 1.0;
        return binom::beta_quantile(1.0 - q, k + 1.0, n - k);
      }
      if (k <= 0) return 0.0;
      return binom::beta_quantile(q, k, n - k + 1.0);
    }
    case BoundMethod::Wilson: {
      const double z = binom::normal_quantile(1.0 - q);
      const double phat = k / n;
      const double denom = 1.0 + z * z / n;
      const double center = (phat + z * z / (2.0 * n)) / denom;
      const double half =
          z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
      return clip01(up ? center + half : center - half);
    }
    case BoundMethod::Jeffreys:
      return clip01(binom::beta_quantile(up ? 1.0 - q : q, k + 0.5, n - k + 0.5));
    case BoundMethod::AgrestiCoull: {
      const double z = binom::normal_quantile(1.0 - q);
      const double n_adj = n + z * z;
      const double p_adj = (k + z * z / 2.0) / n_adj;
      const double half = z * std::sqrt(p_adj * (1.0 - p_adj) / n_adj);
      return clip01(up ? p_adj + half : p_adj - half);
    }
    default:
      throw ValidationError("pointwise_bound: method must be an analytical bound");
  }
}

}  // namespace

double pointwise_bound(double y, double n, double level, BoundMethod method,
                       Side side) {
  check_level(level);
  if (!(n >= 1)) throw ValidationError("n: must be >= 1");
  return bound_at_k(std::round(n * y), n, level, method, side);
}

IntervalBand pointwise_band(const DoseResponseData& data, double level,
                            BoundMethod method, std::span<const double> center) {
  check_level(level);
  if (!center.empty() && center.size() != data.size())
    throw ValidationError("center: length must match the design points");
  IntervalBand band;
  band.x = data.x;
  band.level = level;
  band.method = method;
  band.counts_n = data.n;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double k = center.empty() ? std::round(data.n[j] * data.y[j])
                                    : data.n[j] * center[j];
    band.lower.push_back(bound_at_k(k, data.n[j], level, method, Side::Lower));
    band.upper.push_back(bound_at_k(k, data.n[j], level, method, Side::Upper));
  }
  return band;
}

IntervalBand morris_band(const DoseResponseData& data, double level) {
  check_level(level);
  const double q = (1.0 - level) / 2.0;
  IntervalBand band;
  band.x = data.x;
  band.level = level;
  band.method = BoundMethod::Morris;
  band.counts_n = data.n;
  const std::size_t m = data.size();
  band.lower.resize(m);
  band.upper.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    band.upper[j] = bisect_root(
        [&](double th) { return upper_chain(data, j, th); }, q, /*decreasing=*/true);
    band.lower[j] = bisect_root(
        [&](double th) { return lower_chain(data, j, th); }, q, /*decreasing=*/false);
  }
  tighten(band);
  return band;
}

IntervalBand combined_band(const DoseResponseData& data, double level,
                           BoundMethod pointwise,
                           std::span<const double> center) {
  IntervalBand band = morris_band(data, level);
  band.method = BoundMethod::Combined;
  const IntervalBand pw = pointwise_band(data, level, pointwise, center);
  for (std::size_t j = 0; j < data.size(); ++j) {
    band.upper[j] = std::min(band.upper[j], pw.upper[j]);
    band.lower[j] = std::max(band.lower[j], pw.lower[j]);
  }
  tighten(band);
  return band;
}

std::pair<double, double> band_at_x(const IntervalBand& band, double x) {
  if (x < band.x.front() || x > band.x.back())
    throw DomainError("band_at_x: x outside the design range");
  auto it = std::lower_bound(band.x.begin(), band.x.end(), x);
  const std::size_t i = it - band.x.begin();
  if (i < band.x.size() && band.x[i] == x) return {band.lower[i], band.upper[i]};
  const double t = (x - band.x[i - 1]) / (band.x[i] - band.x[i - 1]);
  return {band.lower[i - 1] + t * (band.lower[i] - band.lower[i - 1]),
          band.upper[i - 1] + t * (band.upper[i] - band.upper[i - 1])};
}

double allocation_inflation_factor(double n_total, double n_j) {
  // 1 + (1 - pi)/(n*pi) with pi = n_j/n, as a single exact ratio
  return (n_total * n_j + (n_total - n_j)) / (n_total * n_j);
}

IntervalBand sequential_inflation(const IntervalBand& band, double n_total,
                                  std::span<const double> center) {
  if (band.counts_n.size() != band.x.size())
    throw ValidationError("sequential_inflation: band lacks per-point sample sizes");
  if (center.size() != band.x.size())
    throw ValidationError("sequential_inflation: center length mismatch");
  IntervalBand out = band;
  for (std::size_t j = 0; j < band.x.size(); ++j) {
    const double nj = band.counts_n[j];
    if (nj <= 0) continue;  // no observations to correct
    const double s = std::sqrt(allocation_inflation_factor(n_total, nj));
    out.lower[j] = clip01(center[j] - (center[j] - band.lower[j]) * s);
    out.upper[j] = clip01(center[j] + (band.upper[j] - center[j]) * s);
  }
  return out;
}

}  // namespace cir
