// SPDX-License-Identifier: Apache-2.0
#include "cir/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cir/curve.hpp"
#include "cir/errors.hpp"

namespace cir {

namespace {

// One pooled stretch. `num`/`den` are the weighted sums defining the block
// value; for the default n-weights num is an exact integer tally sum, so
// value comparisons via cross-multiplication are exact.
struct Block {
  double num;    // sum of w_k * y_k (counts for n-weights)
  double den;    // sum of w_k
  double wx;     // sum of w_k * x_k
  double n_raw;  // sum of n_k (reported pooled sample size)
  int first, last;

  bool single() const { return first == last; }
};

constexpr double kRelTol = 1e-12;

// Three-way comparison of block values num1/den1 vs num2/den2.
int cmp_values(const Block& a, const Block& b) {
  const double lhs = a.num * b.den;
  const double rhs = b.num * a.den;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (std::abs(lhs - rhs) <= kRelTol * scale) return 0;
  return lhs < rhs ? -1 : 1;
}

bool value_in_open_unit(const Block& a) {
  // value > 0 and value < 1, i.e. 0 < num < den
  const double scale = std::max(std::abs(a.num), std::abs(a.den));
  return a.num > kRelTol * scale && a.den - a.num > kRelTol * scale;
}

bool violates(const Block& a, const Block& b, bool strict) {
  const int c = cmp_values(a, b);
  if (c > 0) return true;
  if (strict && c == 0) return value_in_open_unit(a);
  return false;
}

// Adjacent pooling with the given violation predicate. Equivalent to
// resolving the lowest-index violation repeatedly.
std::vector<Block> pool_blocks(const std::vector<double>& x,
                               const std::vector<double>& /*y*/,
                               const std::vector<double>& num,
                               const std::vector<double>& w,
                               const std::vector<double>& n_raw, bool strict) {
  std::vector<Block> blocks;
  blocks.reserve(x.size());
  for (int j = 0; j < static_cast<int>(x.size()); ++j) {
    blocks.push_back({num[j], w[j], w[j] * x[j], n_raw[j], j, j});
    while (blocks.size() >= 2 &&
           violates(blocks[blocks.size() - 2], blocks.back(), strict)) {
      Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      prev.num += top.num;
      prev.den += top.den;
      prev.wx += top.wx;
      prev.n_raw += top.n_raw;
      prev.last = top.last;
    }
  }
  return blocks;
}

double block_value(const Block& b, const std::vector<double>& y) {
  return b.single() ? y[b.first] : b.num / b.den;
}

double block_x(const Block& b, const std::vector<double>& x) {
  return b.single() ? x[b.first] : b.wx / b.den;
}

MonotoneFit fit_from_blocks(const std::vector<Block>& blocks,
                            const DoseResponseData& data, FitMethod method) {
  MonotoneFit fit;
  fit.method = method;
  for (const Block& b : blocks) {
    fit.xs.push_back(block_x(b, data.x));
    fit.fs.push_back(block_value(b, data.y));
    fit.ns.push_back(b.n_raw);
    fit.synthetic.push_back(0);
  }
  // Pooling that consumed a boundary dose shortened the range; re-extend
  // with flat zero-weight points.
  if (fit.xs.front() > data.x.front()) {
    fit.xs.insert(fit.xs.begin(), data.x.front());
    fit.fs.insert(fit.fs.begin(), fit.fs.front());
    fit.ns.insert(fit.ns.begin(), 0.0);
    fit.synthetic.insert(fit.synthetic.begin(), 1);
  }
  if (fit.xs.back() < data.x.back()) {
    fit.xs.push_back(data.x.back());
    fit.fs.push_back(fit.fs.back());
    fit.ns.push_back(0.0);
    fit.synthetic.push_back(1);
  }
  return fit;
}

}  // namespace

MonotoneFit pava(const DoseResponseData& data) {
  const auto blocks =
      pool_blocks(data.x, data.y, data.counts, data.n, data.n, /*strict=*/false);
  MonotoneFit fit;
  fit.method = FitMethod::IR;
  fit.xs = data.x;
  fit.ns = data.n;
  fit.fs.resize(data.size());
  fit.synthetic.assign(data.size(), 0);
  for (const Block& b : blocks) {
    const double v = block_value(b, data.y);
    for (int j = b.first; j <= b.last; ++j) fit.fs[j] = v;
  }
  return fit;
}

MonotoneFit cir_fit(const DoseResponseData& data, bool strict) {
  const auto blocks =
      pool_blocks(data.x, data.y, data.counts, data.n, data.n, strict);
  return fit_from_blocks(blocks, data, FitMethod::CIR);
}

WeightPair bias_optimal_weights(double f1, double f2, double n1, double n2) {
  if (!(f1 > 0.0 && f1 < 1.0) || !(f2 > 0.0 && f2 < 1.0))
    throw DegenerateVarianceError(
        "bias_optimal_weights: f values must lie strictly inside (0,1)");
  if (!(n1 >= 1) || !(n2 >= 1))
    throw ValidationError("bias_optimal_weights: sample sizes must be >= 1");
  const double ratio = (n2 * f1 * (1.0 - f1)) / (n1 * f2 * (1.0 - f2));  // b/a
  const double a = 1.0 / (1.0 + ratio);
  return {a, 1.0 - a};
}

MonotoneFit cir_reweighted(const DoseResponseData& data, int max_iter,
                           double tol) {
  if (max_iter < 1) throw ValidationError("cir_reweighted: max_iter must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("cir_reweighted: tol must be > 0");
  constexpr double kVarFloor = 1e-4;

  MonotoneFit fit = cir_fit(data, /*strict=*/true);
  fit.method = FitMethod::CIRReweighted;

  const std::size_t m = data.size();
  std::vector<double> prev(m);
  {
    const auto curve = PiecewiseLinearCurve::from_fit(fit);
    for (std::size_t j = 0; j < m; ++j) prev[j] = curve.evaluate(data.x[j]);
  }

  bool converged = false;
  for (int it = 0; it < max_iter && !converged; ++it) {
    std::vector<double> w(m), num(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double var = std::max(prev[j] * (1.0 - prev[j]), kVarFloor);
      w[j] = data.n[j] / var;
      num[j] = w[j] * data.y[j];
    }
    const auto blocks = pool_blocks(data.x, data.y, num, w, data.n, /*strict=*/true);
    fit = fit_from_blocks(blocks, data, FitMethod::CIRReweighted);

    const auto curve = PiecewiseLinearCurve::from_fit(fit);
    double delta = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double cur = curve.evaluate(data.x[j]);
      delta = std::max(delta, std::abs(cur - prev[j]));
      prev[j] = cur;
    }
    converged = delta < tol;
  }
  fit.converged = converged;
  return fit;
}

}  // namespace cir
