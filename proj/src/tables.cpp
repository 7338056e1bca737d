// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdio>
#include <string>

#include "cir/errors.hpp"
#include "cir/simbench.hpp"

namespace cir::bench {

namespace {

std::uint64_t cell_seed(std::uint64_t master, Family family, int n) {
  return master * 1000003ULL + static_cast<std::uint64_t>(family) * 101ULL +
         static_cast<std::uint64_t>(n);
}

std::string fmt(double v, int prec) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string ratio_cell(const ForwardSummary& s) {
  return s.ratio_available ? fmt(s.mse_ratio, 2) : "NA";
}

std::string ratio_cell(const InverseSummary& s) {
  return s.ratio_available ? fmt(s.mse_ratio, 2) : "NA";
}

}  // namespace

const std::array<std::string, 8> kTableIds = {
    "T1-forward",     "T2-inverse-fixed", "T3-inverse-sequential",
    "T4-fwd-cov-design", "T5-fwd-cov-interp", "T6-inv-cov",
    "T7-inv-cov-seq", "S-bias"};

std::string to_string(Family f) {
  switch (f) {
    case Family::Logistic: return "Logistic";
    case Family::Weibull: return "Weibull";
    case Family::Staircase: return "Staircase";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "logistic") return Family::Logistic;
  if (t == "weibull") return Family::Weibull;
  if (t == "staircase") return Family::Staircase;
  throw ConfigError("unknown curve family: " + s);
}

BenchConfig config_for(const std::string& table_id, Family family, int n,
                       int ensemble, std::uint64_t master_seed) {
  BenchConfig cfg;
  cfg.family = family;
  cfg.design.m = 5;
  cfg.design.n = n;
  cfg.ensemble = ensemble;
  cfg.master_seed = cell_seed(master_seed, family, n);
  if (table_id == "T1-forward" || table_id == "S-bias") {
    // point estimation only
  } else if (table_id == "T2-inverse-fixed") {
    cfg.want_inverse = true;
    cfg.percentiles = {0.25, 0.5};
  } else if (table_id == "T3-inverse-sequential") {
    cfg.design.kind = DesignKind::KInARow;
    cfg.design.k = 2;
    cfg.want_inverse = true;
    cfg.percentiles = {0.30};
  } else if (table_id == "T4-fwd-cov-design" || table_id == "T5-fwd-cov-interp") {
    cfg.want_bands = true;
  } else if (table_id == "T6-inv-cov") {
    cfg.want_bands = true;
    cfg.want_inverse = true;
    cfg.percentiles = {0.25, 0.5};
  } else if (table_id == "T7-inv-cov-seq") {
    cfg.design.kind = DesignKind::KInARow;
    cfg.design.k = 2;
    cfg.want_bands = true;
    cfg.want_inverse = true;
    cfg.want_inflation = true;
    cfg.percentiles = {0.30};
  } else {
    throw ConfigError("unknown table id: " + table_id);
  }
  return cfg;
}

SummaryTable reproduce_table(const std::string& table_id, int ensemble_size,
                             std::uint64_t master_seed,
                             const std::vector<Family>& families,
                             const std::vector<int>& n_values) {
  if (std::find(kTableIds.begin(), kTableIds.end(), table_id) == kTableIds.end())
    throw ConfigError("unknown table id: " + table_id);

  SummaryTable table;
  table.title = table_id;

  if (table_id == "T1-forward") {
    table.columns = {"family", "n",     "method", "pct_unequal", "mse_ratio",
                     "x2",     "x3",    "x4",     "x2.5",        "x3.75"};
  } else if (table_id == "S-bias") {
    table.columns = {"family", "n",  "method", "bias_x2", "bias_x3",
                     "bias_x4", "bias_x2.5", "bias_x3.75"};
  } else if (table_id == "T2-inverse-fixed") {
    table.columns = {"family", "n", "method", "pct_unequal", "mse_ratio",
                     "rmse_p25", "rmse_p50"};
  } else if (table_id == "T3-inverse-sequential") {
    table.columns = {"family", "n", "pct_unequal", "mse_ratio",
                     "rmse_ir_p30", "rmse_cir_p30"};
  } else if (table_id == "T4-fwd-cov-design" || table_id == "T5-fwd-cov-interp") {
    table.columns = {"family",          "n",
                     "coverage_combined", "width_combined",
                     "coverage_morris",   "width_morris",
                     "coverage_wilson",   "width_wilson"};
  } else if (table_id == "T6-inv-cov") {
    table.columns = {"family", "n", "found_local", "found_global",
                     "coverage_local", "width_local", "coverage_global",
                     "width_global"};
  } else {  // T7-inv-cov-seq
    table.columns = {"family", "n", "coverage_local", "width_local",
                     "coverage_local_seq", "width_local_seq"};
  }

  for (Family family : families) {
    for (int n : n_values) {
      const BenchConfig cfg =
          config_for(table_id, family, n, ensemble_size, master_seed);
      const auto runs = run_ensemble(cfg);
      const std::string fam = to_string(family);
      const std::string ns = std::to_string(n);

      if (table_id == "T1-forward") {
        const ForwardSummary s = summarize_forward(runs);
        std::vector<std::string> ir_row = {fam, ns, "IR",
                                           fmt(s.pct_unequal, 1), ratio_cell(s)};
        std::vector<std::string> cir_row = {fam, ns, "CIR",
                                            fmt(s.pct_unequal, 1), ratio_cell(s)};
        for (const TargetSummary& t : s.targets) {
          ir_row.push_back(fmt(t.rmse_ir, 3));
          cir_row.push_back(fmt(t.rmse_cir, 3));
        }
        table.rows.push_back(ir_row);
        table.rows.push_back(cir_row);
      } else if (table_id == "S-bias") {
        const ForwardSummary s = summarize_forward(runs);
        std::vector<std::string> ir_row = {fam, ns, "IR"};
        std::vector<std::string> cir_row = {fam, ns, "CIR"};
        for (const TargetSummary& t : s.targets) {
          ir_row.push_back(fmt(t.bias_ir, 4));
          cir_row.push_back(fmt(t.bias_cir, 4));
        }
        table.rows.push_back(ir_row);
        table.rows.push_back(cir_row);
      } else if (table_id == "T2-inverse-fixed") {
        const InverseSummary s = summarize_inverse(runs);
        std::vector<std::string> ir_row = {fam, ns, "IR",
                                           fmt(s.pct_unequal, 1), ratio_cell(s)};
        std::vector<std::string> cir_row = {fam, ns, "CIR",
                                            fmt(s.pct_unequal, 1), ratio_cell(s)};
        for (const TargetSummary& t : s.targets) {
          ir_row.push_back(fmt(t.rmse_ir, 3));
          cir_row.push_back(fmt(t.rmse_cir, 3));
        }
        table.rows.push_back(ir_row);
        table.rows.push_back(cir_row);
      } else if (table_id == "T3-inverse-sequential") {
        const InverseSummary s = summarize_inverse(runs);
        table.rows.push_back({fam, ns, fmt(s.pct_unequal, 1), ratio_cell(s),
                              fmt(s.targets[0].rmse_ir, 3),
                              fmt(s.targets[0].rmse_cir, 3)});
      } else if (table_id == "T4-fwd-cov-design") {
        const BandSummary c = summarize_band(runs, &RunResult::combined_design);
        const BandSummary m = summarize_band(runs, &RunResult::morris_design);
        const BandSummary w = summarize_band(runs, &RunResult::wilson_design);
        table.rows.push_back({fam, ns, fmt(c.coverage, 3), fmt(c.mean_width, 3),
                              fmt(m.coverage, 3), fmt(m.mean_width, 3),
                              fmt(w.coverage, 3), fmt(w.mean_width, 3)});
      } else if (table_id == "T5-fwd-cov-interp") {
        const BandSummary c = summarize_band(runs, &RunResult::combined_interp);
        const BandSummary m = summarize_band(runs, &RunResult::morris_interp);
        const BandSummary w = summarize_band(runs, &RunResult::wilson_interp);
        table.rows.push_back({fam, ns, fmt(c.coverage, 3), fmt(c.mean_width, 3),
                              fmt(m.coverage, 3), fmt(m.mean_width, 3),
                              fmt(w.coverage, 3), fmt(w.mean_width, 3)});
      } else if (table_id == "T6-inv-cov") {
        const InverseSummary s = summarize_inverse(runs);
        table.rows.push_back({fam, ns, fmt(s.found_local, 3),
                              fmt(s.found_global, 3), fmt(s.cov_local, 3),
                              fmt(s.width_local, 3), fmt(s.cov_global, 3),
                              fmt(s.width_global, 3)});
      } else {  // T7-inv-cov-seq
        const InverseSummary s = summarize_inverse(runs);
        table.rows.push_back({fam, ns, fmt(s.cov_local, 3),
                              fmt(s.width_local, 3),
                              fmt(s.cov_local_inflated, 3),
                              fmt(s.width_local_inflated, 3)});
      }
    }
  }
  return table;
}

}  // namespace cir::bench
