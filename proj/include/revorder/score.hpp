#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace revorder {

struct ScoreMismatch {
  std::size_t line = 0;  // 1-based
  std::string expected;
  std::string found;

  bool operator==(const ScoreMismatch&) const = default;
};

struct ScoreReport {
  std::size_t total = 0;
  std::size_t exact_matches = 0;
  std::vector<ScoreMismatch> first_mismatches;  // at most 10, in line order

  double precision() const {
    return total == 0 ? 1.0 : static_cast<double>(exact_matches) / static_cast<double>(total);
  }

  bool operator==(const ScoreReport&) const = default;
};

/// Line-by-line exact match of predictions against references, ignoring
/// trailing whitespace. A missing line on either side counts as a mismatch.
/// With decode = true, any line that parses as a full trace — or that
/// carries an explicit "r|" reversed literal — is reduced to its forward
/// value before comparison; other lines compare as-is.
ScoreReport score_lines(std::istream& predictions, std::istream& references,
                        bool decode = false);

}  // namespace revorder
