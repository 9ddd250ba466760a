#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revorder/digits.hpp"

namespace revorder {

/// Output-digit ordering of the result of an equation. Plain emits the most
/// significant digit first; RevOrder emits least-significant-first behind the
/// "r|" token.
enum class FormatPolicy { Plain, RevOrder };

struct CsidStep {
  std::size_t position;   // 10^position of the emitted result digit
  std::size_t sid_count;  // sequential intermediate digits needed at that step

  bool operator==(const CsidStep&) const = default;
};

/// Per-emitted-digit SID counts for one equation under a formatting policy,
/// in emission order, plus their maximum.
struct CsidReport {
  std::vector<CsidStep> per_step;
  std::size_t max_csid = 0;

  bool operator==(const CsidReport&) const = default;
};

/// Scores the equation a+b. To score a subtraction a-b, pass b negated; the
/// carry/borrow columns are those of add_with_carries.
///
/// Plain policy: the SID count of a result digit is the length of the maximal
/// contiguous carry (or borrow) run immediately below it. RevOrder policy:
/// 1 where a carry or borrow enters the position, else 0.
CsidReport csid_add_sub(const DigitString& a, const DigitString& b, FormatPolicy policy);

/// Length of the longest run of consecutive carries in the column addition
/// a+b. Requires same-sign operands; throws DomainError otherwise.
std::size_t classify_carry_chain(const DigitString& a, const DigitString& b);

enum class WorstCaseOp { Add, Sub, MulDirect, MulDecomposed, DivDirect, DivDecomposed };

/// Worst-case SID count: either an exact closed form or a growth class when
/// only the asymptotic order is defined.
struct WorstCase {
  enum class Kind { Exact, Linear };
  Kind kind = Kind::Exact;
  std::uint64_t value = 0;  // meaningful for Exact only

  std::string to_string() const { return kind == Kind::Exact ? std::to_string(value) : "O(n)"; }

  bool operator==(const WorstCase&) const = default;
};

/// Closed-form worst cases: n for add/sub (plain order), 6n^2+n for direct
/// multiplication, 2n^2-2m^2 for direct division; decomposed multiplication
/// and division only have a linear growth class. Requires n >= m >= 1;
/// throws DomainError otherwise.
WorstCase csid_worstcase(WorstCaseOp op, std::uint64_t n, std::uint64_t m = 1);

}  // namespace revorder
