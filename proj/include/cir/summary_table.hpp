// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace cir {

/// Preformatted result table; cells are strings so emitted bytes are
/// deterministic for a given configuration and seed.
struct SummaryTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_text() const;  // column-aligned
};

}  // namespace cir
