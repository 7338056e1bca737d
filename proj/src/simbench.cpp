// SPDX-License-Identifier: Apache-2.0
#include "cir/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "cir/curve.hpp"
#include "cir/errors.hpp"
#include "cir/inverse_intervals.hpp"
#include "cir/isotonic.hpp"

namespace cir::bench {

namespace {

constexpr double kEqTol = 1e-12;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double ScenarioSpec::cdf(double x) const {
  switch (family) {
    case Family::Logistic:
      return 1.0 / (1.0 + std::exp(-(x - p1) / p2));
    case Family::Weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p2, p1));
    case Family::Staircase:
      return p5 * norm_cdf((x - p1) / p3) + (1.0 - p5) * norm_cdf((x - p2) / p4);
  }
  return 0.0;
}

double ScenarioSpec::quantile(double p, double lo, double hi) const {
  if (cdf(lo) >= p) return lo;
  if (cdf(hi) <= p) return hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ScenarioSpec draw_scenario(Family family, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unif = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  const double x1 = 1.0, xm = 5.0;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ScenarioSpec s;
    s.family = family;
    s.seed = seed;
    switch (family) {
      case Family::Logistic:
        s.p1 = unif(x1, xm);      // location
        s.p2 = unif(0.3, 2.0);    // scale
        break;
      case Family::Weibull: {
        s.p1 = unif(0.8, 4.0);    // shape
        const double median = unif(x1, xm);
        s.p2 = median / std::pow(std::log(2.0), 1.0 / s.p1);  // scale
        break;
      }
      case Family::Staircase:
        // second mean kept a few sd above dose 4 so the plateau between the
        // two jumps covers at least one whole inter-dose interval
        s.p1 = 2.0 + unif(-0.6, 0.6);  // first component mean, near x2
        s.p2 = 4.0 + unif(0.3, 0.6);   // second component mean, near x4
        s.p3 = unif(0.04, 0.12);       // sd1
        s.p4 = unif(0.04, 0.12);       // sd2
        s.p5 = unif(0.3, 0.7);         // mixing weight
        break;
    }
    const double f1 = s.cdf(x1), fm = s.cdf(xm);
    const bool floor_ok = family == Family::Staircase || f1 >= 0.01;
    if (floor_ok && f1 <= 0.2 && fm >= 0.5 && fm - f1 >= 0.3) return s;
  }
  throw ConfigError("draw_scenario: vetting failed 1000 consecutive times");
}

DoseResponseData simulate_tallies(const ScenarioSpec& scenario,
                                  const DesignSpec& design,
                                  std::uint64_t rng_seed) {
  if (design.m < 2) throw ConfigError("design: m must be >= 2");
  if (design.n < design.m && design.kind == DesignKind::FixedEqual)
    throw ConfigError("design: n must be >= m for an equal split");
  std::mt19937_64 rng(rng_seed);
  const int m = design.m;
  std::vector<double> probs(m);
  for (int j = 0; j < m; ++j) probs[j] = scenario.cdf(j + 1.0);

  std::vector<int> tot(m, 0), pos(m, 0);
  if (design.kind == DesignKind::FixedEqual) {
    const int base = design.n / m, rem = design.n % m;
    for (int j = 0; j < m; ++j) {
      tot[j] = base + (j < rem ? 1 : 0);
      std::binomial_distribution<int> bin(tot[j], probs[j]);
      pos[j] = bin(rng);
    }
  } else {
    if (design.k < 1) throw ConfigError("design: k must be >= 1");
    int idx = std::clamp(design.start_index - 1, 0, m - 1);
    int consec = 0;
    for (int subj = 0; subj < design.n; ++subj) {
      std::bernoulli_distribution resp(probs[idx]);
      const bool positive = resp(rng);
      ++tot[idx];
      if (positive) ++pos[idx];
      if (positive) {
        idx = std::max(idx - 1, 0);
        consec = 0;
      } else if (++consec == design.k) {
        idx = std::min(idx + 1, m - 1);
        consec = 0;
      }
    }
  }

  std::vector<double> x, events, trials;
  for (int j = 0; j < m; ++j) {
    if (tot[j] == 0) continue;  // doses never visited carry no information
    x.push_back(j + 1.0);
    events.push_back(pos[j]);
    trials.push_back(tot[j]);
  }
  return DoseResponseData::from_counts(std::move(x), std::move(events),
                                       std::move(trials));
}

namespace {

void record_band_points(const ScenarioSpec& scen, const IntervalBand& band,
                        BandRecord& design_rec, BandRecord& interp_rec,
                        const std::vector<double>& interp_points) {
  for (std::size_t j = 0; j < band.x.size(); ++j) {
    const double truth = scen.cdf(band.x[j]);
    design_rec.cover_sum += (band.lower[j] <= truth && truth <= band.upper[j]);
    design_rec.width_sum += band.upper[j] - band.lower[j];
    ++design_rec.count;
  }
  for (double xq : interp_points) {
    if (xq < band.x.front() || xq > band.x.back()) continue;
    const auto [lo, up] = band_at_x(band, xq);
    const double truth = scen.cdf(xq);
    interp_rec.cover_sum += (lo <= truth && truth <= up);
    interp_rec.width_sum += up - lo;
    ++interp_rec.count;
  }
}

IntervalRecord make_interval_record(double lower, double upper, double truth) {
  IntervalRecord rec;
  rec.found = true;
  rec.lower = lower;
  rec.upper = upper;
  rec.covered = lower <= truth && truth <= upper;
  rec.width = upper - lower;
  return rec;
}

}  // namespace

RunResult run_one(const BenchConfig& cfg, std::uint64_t run_index) {
  const std::uint64_t base = mix(cfg.master_seed, run_index);
  RunResult rr;
  rr.scenario = draw_scenario(cfg.family, mix(base, 1));
  const DoseResponseData data =
      simulate_tallies(rr.scenario, cfg.design, mix(base, 2));
  rr.tally_x = data.x;
  rr.tally_y = data.y;
  rr.tally_n = data.n;

  const MonotoneFit ir = pava(data);
  const MonotoneFit cf = cir_fit(data);
  const PiecewiseLinearCurve ir_curve = PiecewiseLinearCurve::from_fit(ir);
  const PiecewiseLinearCurve cir_curve = PiecewiseLinearCurve::from_fit(cf);

  const std::vector<double> interp_points = {2.5, 3.75};

  if (cfg.design.kind == DesignKind::FixedEqual && cfg.design.m == 5) {
    for (double xq : {2.0, 3.0, 4.0, 2.5, 3.75}) {
      TargetRecord t;
      t.x = xq;
      t.truth = rr.scenario.cdf(xq);
      t.est_ir = ir_curve.evaluate(xq);
      t.est_cir = cir_curve.evaluate(xq);
      t.found_ir = t.found_cir = true;
      if (std::abs(t.est_ir - t.est_cir) > kEqTol) rr.forward_unequal = true;
      rr.forward.push_back(t);
    }
  }

  IntervalBand combined;
  const bool need_band = cfg.want_bands || cfg.want_inflation;
  // analytic bounds are taken around the monotone fit's estimates
  std::vector<double> center(data.size());
  for (std::size_t j = 0; j < data.size(); ++j)
    center[j] = cir_curve.evaluate(data.x[j]);
  if (need_band)
    combined = combined_band(data, cfg.level, BoundMethod::Wilson, center);

  if (cfg.want_bands) {
    rr.has_bands = true;
    record_band_points(rr.scenario, combined, rr.combined_design,
                       rr.combined_interp, interp_points);
    record_band_points(rr.scenario, morris_band(data, cfg.level),
                       rr.morris_design, rr.morris_interp, interp_points);
    record_band_points(
        rr.scenario,
        pointwise_band(data, cfg.level, BoundMethod::Wilson, center),
        rr.wilson_design, rr.wilson_interp, interp_points);
  }

  if (cfg.want_inverse) {
    IntervalBand inflated;
    if (cfg.want_inflation)
      inflated = sequential_inflation(combined, data.total_n(), center);
    for (double p : cfg.percentiles) {
      InverseRecord rec;
      rec.p = p;
      rec.truth = rr.scenario.quantile(p, 1.0, cfg.design.m);
      try {
        rec.est.est_ir = ir_curve.invert(p).x;
        rec.est.found_ir = true;
      } catch (const NotEstimableError&) {
      }
      try {
        rec.est.est_cir = cir_curve.invert(p).x;
        rec.est.found_cir = true;
      } catch (const NotEstimableError&) {
      }
      rec.est.truth = rec.truth;
      const bool unequal =
          rec.est.found_ir != rec.est.found_cir ||
          (rec.est.found_ir && std::abs(rec.est.est_ir - rec.est.est_cir) > kEqTol);
      if (unequal) rr.inverse_unequal = true;

      if (need_band) {
        try {
          const auto li = local_inverse(cir_curve, combined, p);
          rec.local = make_interval_record(li.lower, li.upper, rec.truth);
        } catch (const std::domain_error&) {
        }
        const auto gi = global_inverse(combined, p);
        if (gi.finite)
          rec.global = make_interval_record(gi.lower, gi.upper, rec.truth);
        if (cfg.want_inflation) {
          try {
            const auto lis = local_inverse(cir_curve, inflated, p);
            rec.local_inflated =
                make_interval_record(lis.lower, lis.upper, rec.truth);
          } catch (const std::domain_error&) {
          }
        }
      }
      rr.inverse.push_back(rec);
    }
  }
  return rr;
}

std::vector<RunResult> run_ensemble(const BenchConfig& cfg) {
  std::vector<RunResult> out;
  out.reserve(cfg.ensemble);
  for (int i = 0; i < cfg.ensemble; ++i)
    out.push_back(run_one(cfg, static_cast<std::uint64_t>(i)));
  return out;
}

// ---- summaries ----

namespace {

struct Accum {
  double sum = 0, sumsq = 0;
  int count = 0;
  void add(double e) { sum += e; sumsq += e * e; ++count; }
  double mse() const { return count ? sumsq / count : 0.0; }
  double rmse() const { return std::sqrt(mse()); }
  double mean() const { return count ? sum / count : 0.0; }
};

}  // namespace

ForwardSummary summarize_forward(const std::vector<RunResult>& runs) {
  ForwardSummary out;
  if (runs.empty() || runs.front().forward.empty()) return out;
  const std::size_t nt = runs.front().forward.size();
  // %Unequal counts (run, target) estimate pairs, and the MSE ratio at each
  // target conditions on that target's estimates differing.
  long unequal = 0, pairs = 0;
  std::vector<Accum> ir(nt), cirv(nt), ir_diff(nt), cir_diff(nt);
  for (const RunResult& r : runs) {
    for (std::size_t t = 0; t < nt; ++t) {
      const TargetRecord& rec = r.forward[t];
      ir[t].add(rec.est_ir - rec.truth);
      cirv[t].add(rec.est_cir - rec.truth);
      ++pairs;
      if (std::abs(rec.est_ir - rec.est_cir) > 1e-12) {
        ++unequal;
        ir_diff[t].add(rec.est_ir - rec.truth);
        cir_diff[t].add(rec.est_cir - rec.truth);
      }
    }
  }
  out.pct_unequal = 100.0 * unequal / pairs;
  double ratio_sum = 0;
  int ratio_count = 0;
  char label[32];
  for (std::size_t t = 0; t < nt; ++t) {
    TargetSummary ts;
    std::snprintf(label, sizeof label, "x=%g", runs.front().forward[t].x);
    ts.label = label;
    ts.rmse_ir = ir[t].rmse();
    ts.rmse_cir = cirv[t].rmse();
    ts.bias_ir = ir[t].mean();
    ts.bias_cir = cirv[t].mean();
    if (cir_diff[t].count > 0 && cir_diff[t].mse() > 0) {
      ts.mse_ratio = ir_diff[t].mse() / cir_diff[t].mse();
      ts.ratio_available = true;
      ratio_sum += ts.mse_ratio;
      ++ratio_count;
    }
    out.targets.push_back(ts);
  }
  if (ratio_count > 0) {
    out.mse_ratio = ratio_sum / ratio_count;
    out.ratio_available = true;
  }
  return out;
}

BandSummary summarize_band(const std::vector<RunResult>& runs,
                           BandRecord RunResult::* member) {
  BandSummary out;
  double cover = 0, width = 0;
  long count = 0;
  for (const RunResult& r : runs) {
    const BandRecord& rec = r.*member;
    cover += rec.cover_sum;
    width += rec.width_sum;
    count += rec.count;
  }
  if (count > 0) {
    out.coverage = cover / count;
    out.mean_width = width / count;
  }
  return out;
}

InverseSummary summarize_inverse(const std::vector<RunResult>& runs) {
  InverseSummary out;
  if (runs.empty() || runs.front().inverse.empty()) return out;
  const std::size_t nt = runs.front().inverse.size();
  long unequal = 0, pairs = 0;
  std::vector<Accum> ir(nt), cirv(nt), ir_diff(nt), cir_diff(nt);
  long local_found = 0, global_found = 0, local_cov = 0, global_cov = 0;
  long both = 0, infl_found = 0, infl_cov = 0;
  double local_w = 0, global_w = 0, infl_w = 0;
  long total = 0;
  for (const RunResult& r : runs) {
    for (std::size_t t = 0; t < nt; ++t) {
      const InverseRecord& rec = r.inverse[t];
      ++total;
      if (rec.est.found_ir) ir[t].add(rec.est.est_ir - rec.truth);
      if (rec.est.found_cir) cirv[t].add(rec.est.est_cir - rec.truth);
      if (rec.est.found_ir && rec.est.found_cir) {
        ++pairs;
        if (std::abs(rec.est.est_ir - rec.est.est_cir) > 1e-12) {
          ++unequal;
          ir_diff[t].add(rec.est.est_ir - rec.truth);
          cir_diff[t].add(rec.est.est_cir - rec.truth);
        }
      }
      if (rec.local.found) {
        ++local_found;
        local_cov += rec.local.covered;
      }
      if (rec.global.found) {
        ++global_found;
        global_cov += rec.global.covered;
      }
      if (rec.local.found && rec.global.found) {
        ++both;
        local_w += rec.local.width;
        global_w += rec.global.width;
      }
      if (rec.local_inflated.found) {
        ++infl_found;
        infl_cov += rec.local_inflated.covered;
        infl_w += rec.local_inflated.width;
      }
    }
  }
  out.pct_unequal = pairs ? 100.0 * unequal / pairs : 0.0;
  double ratio_sum = 0;
  int ratio_count = 0;
  char label[32];
  for (std::size_t t = 0; t < nt; ++t) {
    TargetSummary ts;
    std::snprintf(label, sizeof label, "p=%g", runs.front().inverse[t].p);
    ts.label = label;
    ts.rmse_ir = ir[t].rmse();
    ts.rmse_cir = cirv[t].rmse();
    ts.bias_ir = ir[t].mean();
    ts.bias_cir = cirv[t].mean();
    if (cir_diff[t].count > 0 && cir_diff[t].mse() > 0) {
      ts.mse_ratio = ir_diff[t].mse() / cir_diff[t].mse();
      ts.ratio_available = true;
      ratio_sum += ts.mse_ratio;
      ++ratio_count;
    }
    out.targets.push_back(ts);
  }
  if (ratio_count > 0) {
    out.mse_ratio = ratio_sum / ratio_count;
    out.ratio_available = true;
  }
  if (total > 0) {
    out.found_local = static_cast<double>(local_found) / total;
    out.found_global = static_cast<double>(global_found) / total;
  }
  if (local_found > 0)
    out.cov_local = static_cast<double>(local_cov) / local_found;
  if (global_found > 0)
    out.cov_global = static_cast<double>(global_cov) / global_found;
  if (both > 0) {
    out.width_local = local_w / both;
    out.width_global = global_w / both;
  }
  if (infl_found > 0) {
    out.cov_local_inflated = static_cast<double>(infl_cov) / infl_found;
    out.width_local_inflated = infl_w / infl_found;
  }
  return out;
}

}  // namespace cir::bench
