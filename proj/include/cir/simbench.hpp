// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cir/dose_response.hpp"
#include "cir/summary_table.hpp"

namespace cir::bench {

enum class Family { Logistic, Weibull, Staircase };
enum class DesignKind { FixedEqual, KInARow };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// One randomly drawn true curve. Parameter meaning depends on the family:
///  Logistic  - location, scale
///  Weibull   - shape, scale
///  Staircase - mean1, mean2, sd1, sd2, mixing weight (two normal CDFs)
struct ScenarioSpec {
  Family family = Family::Logistic;
  std::uint64_t seed = 0;
  double p1 = 0, p2 = 0, p3 = 0, p4 = 0, p5 = 0;

  double cdf(double x) const;
  /// Dose with cdf(x) = p, found by bisection on [lo, hi].
  double quantile(double p, double lo, double hi) const;
};

/// Draw family parameters, rejecting until the vetting constraints hold
/// (realistic, non-degenerate curves over the dose grid). Deterministic in
/// the seed; throws ConfigError after 1000 consecutive rejections.
ScenarioSpec draw_scenario(Family family, std::uint64_t seed);

struct DesignSpec {
  DesignKind kind = DesignKind::FixedEqual;
  int m = 5;            // number of design points (doses 1..m, unit-spaced)
  int n = 20;           // total sample size
  int k = 2;            // k-in-a-row run length
  int start_index = 1;  // 1-based initial dose index
};

/// Simulate the dose allocation and responses only; analysis is separate.
/// FixedEqual splits n equally (remainder to the lowest-indexed doses);
/// KInARow escalates after k consecutive negative responses, de-escalates
/// after any positive one, clipped at the extreme doses. Doses never
/// visited are dropped from the returned tallies.
DoseResponseData simulate_tallies(const ScenarioSpec& scenario,
                                  const DesignSpec& design,
                                  std::uint64_t rng_seed);

struct TargetRecord {
  double x = 0;
  double truth = 0;
  double est_ir = 0, est_cir = 0;
  bool found_ir = false, found_cir = false;
};

struct IntervalRecord {
  bool found = false;
  double lower = 0, upper = 0;
  bool covered = false;
  double width = 0;
};

struct BandRecord {  // sums over evaluation points of one run
  double cover_sum = 0, width_sum = 0;
  int count = 0;
};

struct InverseRecord {
  double p = 0;
  double truth = 0;
  TargetRecord est;  // x field unused
  IntervalRecord local, global, local_inflated;
};

struct RunResult {
  ScenarioSpec scenario;
  std::vector<double> tally_x, tally_y, tally_n;
  bool forward_unequal = false;
  std::vector<TargetRecord> forward;  // x2,x3,x4,x2.5,x3.75 when m = 5
  bool has_bands = false;
  BandRecord combined_design, morris_design, wilson_design;
  BandRecord combined_interp, morris_interp, wilson_interp;
  bool inverse_unequal = false;
  std::vector<InverseRecord> inverse;
};

struct BenchConfig {
  Family family = Family::Logistic;
  DesignSpec design;
  int ensemble = 1000;
  std::uint64_t master_seed = 0;
  double level = 0.90;
  bool want_bands = false;             // forward coverage records
  bool want_inverse = false;           // inverse estimates + intervals
  bool want_inflation = false;         // also record inflated local intervals
  std::vector<double> percentiles;     // inverse targets
};

/// Run a single experiment: simulate, fit IR and CIR, and record the
/// requested estimates, coverage flags and interval widths.
RunResult run_one(const BenchConfig& cfg, std::uint64_t run_index);

/// Deterministic fold over run indices 0..ensemble-1; each run derives its
/// private RNG streams from (master_seed, run_index).
std::vector<RunResult> run_ensemble(const BenchConfig& cfg);

// ---- summaries ----

struct TargetSummary {
  std::string label;
  double rmse_ir = 0, rmse_cir = 0;
  double bias_ir = 0, bias_cir = 0;
  double mse_ratio = 0;       // IR/CIR over differing runs
  bool ratio_available = false;
};

struct ForwardSummary {
  double pct_unequal = 0;
  double mse_ratio = 0;       // mean of per-target ratios
  bool ratio_available = false;
  std::vector<TargetSummary> targets;
};

struct BandSummary {
  double coverage = 0, mean_width = 0;
};

struct InverseSummary {
  double pct_unequal = 0;
  double mse_ratio = 0;
  bool ratio_available = false;
  std::vector<TargetSummary> targets;       // per percentile
  double found_local = 0, found_global = 0;
  double cov_local = 0, cov_global = 0;
  double width_local = 0, width_global = 0;  // over runs where both found
  double cov_local_inflated = 0, width_local_inflated = 0;
};

ForwardSummary summarize_forward(const std::vector<RunResult>& runs);
BandSummary summarize_band(const std::vector<RunResult>& runs,
                           BandRecord RunResult::* member);
InverseSummary summarize_inverse(const std::vector<RunResult>& runs);

// ---- paper-table reproduction ----

extern const std::array<std::string, 8> kTableIds;
// {"T1-forward","T2-inverse-fixed","T3-inverse-sequential","T4-fwd-cov-design",
//  "T5-fwd-cov-interp","T6-inv-cov","T7-inv-cov-seq","S-bias"}

/// Bench configuration behind one cell (family, n) of a given table.
BenchConfig config_for(const std::string& table_id, Family family, int n,
                       int ensemble, std::uint64_t master_seed);

/// Run the full experiment grid (families x n in {20,40,80}) for a table
/// and lay out the results. Throws ConfigError for unknown ids.
SummaryTable reproduce_table(const std::string& table_id, int ensemble_size,
                             std::uint64_t master_seed,
                             const std::vector<Family>& families =
                                 {Family::Logistic, Family::Weibull,
                                  Family::Staircase},
                             const std::vector<int>& n_values = {20, 40, 80});

}  // namespace cir::bench
