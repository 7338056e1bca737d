// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cir {

/// Input data failed a structural invariant (lengths, ordering, ranges).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Query point lies outside the supported domain (no extrapolation).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// Requested probability is outside the attained range of the curve.
class NotEstimableError : public std::domain_error {
 public:
  explicit NotEstimableError(const std::string& msg) : std::domain_error(msg) {}
};

/// All point estimates identical; no usable slope exists.
class ZeroSlopeError : public std::domain_error {
 public:
  explicit ZeroSlopeError(const std::string& msg) : std::domain_error(msg) {}
};

/// Variance term F(1-F) vanishes; inverse-variance weights undefined.
class DegenerateVarianceError : public std::domain_error {
 public:
  explicit DegenerateVarianceError(const std::string& msg) : std::domain_error(msg) {}
};

/// An inverse confidence interval cannot be produced for this input.
class NoIntervalError : public std::domain_error {
 public:
  explicit NoIntervalError(const std::string& msg) : std::domain_error(msg) {}
};

/// Bad simulation or CLI configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cir
