#include "revorder/score.hpp"

#include <istream>
#include <optional>

#include "revorder/traces.hpp"

namespace revorder {

namespace {

std::string rstrip(std::string line) {
  while (!line.empty() &&
         (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
    line.pop_back();
  }
  return line;
}

/// Forward value of a trace or of an explicit reversed literal; lines that
/// are neither stay unchanged. Plain digit runs are deliberately not treated
/// as reversed, so forward references survive decoding untouched.
std::string decode_line(const std::string& line) {
  try {
    Trace t = parse(line);
    std::string s = t.final.to_decimal();
    if (t.equation.op == Op::Div && t.remainder && !t.remainder->is_zero()) {
      s += "R" + t.remainder->to_decimal();
    }
    return s;
  } catch (const ParseError&) {
  }
  std::string_view v = line;
  bool neg = false;
  if (v.starts_with("-")) {
    neg = true;
    v.remove_prefix(1);
  }
  if (v.starts_with("r|")) {
    v.remove_prefix(2);
    try {
      ReversedLiteral lit{std::string(v), neg};
      return from_reversed_literal(lit).to_decimal();
    } catch (const ParseError&) {
    }
  }
  return line;
}

std::optional<std::string> next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  return rstrip(std::move(line));
}

}  // namespace

ScoreReport score_lines(std::istream& predictions, std::istream& references,
                        bool decode) {
  ScoreReport report;
  for (std::size_t line_no = 1;; ++line_no) {
    std::optional<std::string> pred = next_line(predictions);
    std::optional<std::string> ref = next_line(references);
    if (!pred && !ref) break;
    ++report.total;
    std::string found = pred ? (decode ? decode_line(*pred) : *pred) : "<missing>";
    std::string expected = ref ? (decode ? decode_line(*ref) : *ref) : "<missing>";
    if (pred && ref && found == expected) {
      ++report.exact_matches;
    } else if (report.first_mismatches.size() < 10) {
      report.first_mismatches.push_back({line_no, expected, found});
    }
  }
  return report;
}

}  // namespace revorder
