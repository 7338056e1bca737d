// SPDX-License-Identifier: Apache-2.0
#include "cir/dose_response.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "cir/errors.hpp"

namespace cir {

namespace {

void validate(const std::vector<double>& x, const std::vector<double>& y,
              const std::vector<double>& n) {
  if (x.empty()) throw ValidationError("x: must contain at least one design point");
  if (y.size() != x.size() || n.size() != x.size())
    throw ValidationError("y/n: length mismatch with x");
  for (std::size_t j = 0; j + 1 < x.size(); ++j)
    if (!(x[j] < x[j + 1]))
      throw ValidationError("x: must be strictly increasing (index " +
                            std::to_string(j + 1) + ")");
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(n[j] >= 1) || n[j] != std::floor(n[j]))
      throw ValidationError("n: sample sizes must be integers >= 1 (index " +
                            std::to_string(j) + ")");
    if (!(y[j] >= 0.0 && y[j] <= 1.0))
      throw ValidationError("y: proportions must lie in [0,1] (index " +
                            std::to_string(j) + ")");
    const double events = n[j] * y[j];
    if (std::abs(events - std::round(events)) > 1e-9)
      throw ValidationError("y: n*y must be an integer tally (index " +
                            std::to_string(j) + ")");
  }
}

}  // namespace

DoseResponseData::DoseResponseData(std::vector<double> x_, std::vector<double> y_,
                                   std::vector<double> n_)
    : x(std::move(x_)), y(std::move(y_)), n(std::move(n_)) {
  validate(x, y, n);
  counts.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) counts[j] = std::round(n[j] * y[j]);
}

DoseResponseData DoseResponseData::from_counts(std::vector<double> x,
                                               std::vector<double> events,
                                               std::vector<double> trials) {
  if (events.size() != trials.size() || events.size() != x.size())
    throw ValidationError("events/trials: length mismatch with x");
  std::vector<double> y(events.size());
  for (std::size_t j = 0; j < events.size(); ++j) {
    if (!(trials[j] >= 1))
      throw ValidationError("trials: must be >= 1 (index " + std::to_string(j) + ")");
    if (events[j] < 0 || events[j] > trials[j])
      throw ValidationError("events: must lie in [0, trials] (index " +
                            std::to_string(j) + ")");
    y[j] = events[j] / trials[j];
  }
  return DoseResponseData(std::move(x), std::move(y), std::move(trials));
}

double DoseResponseData::total_n() const {
  return std::accumulate(n.begin(), n.end(), 0.0);
}

double DoseResponseData::total_events() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

}  // namespace cir
