// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace cir {

/// Binomial tallies at strictly increasing dose levels.
///
/// `y` holds observed response proportions; `n` the per-dose sample sizes.
/// `counts` caches the integer success tallies n_j * y_j, which keeps the
/// pooling arithmetic exact (estimates are ratios of small integers).
struct DoseResponseData {
  std::vector<double> x;       // dose levels, strictly increasing
  std::vector<double> y;       // response proportions in [0,1]
  std::vector<double> n;       // sample sizes, integers >= 1
  std::vector<double> counts;  // n_j * y_j, rounded to exact integers

  DoseResponseData(std::vector<double> x, std::vector<double> y,
                   std::vector<double> n);

  /// Build from raw event/trial counts (the natural form of study data).
  static DoseResponseData from_counts(std::vector<double> x,
                                      std::vector<double> events,
                                      std::vector<double> trials);

  std::size_t size() const { return x.size(); }
  double total_n() const;
  double total_events() const;
};

}  // namespace cir
