#include "revorder/csid.hpp"

#include <algorithm>

namespace revorder {

CsidReport csid_add_sub(const DigitString& a, const DigitString& b, FormatPolicy policy) {
  AddWithCarries r = add_with_carries(a, b);
  const std::vector<std::uint8_t>& bits = r.carries.values;
  std::size_t t = r.sum.digit_count();

  CsidReport report;
  report.per_step.reserve(t);
  if (policy == FormatPolicy::RevOrder) {
    for (std::size_t pos = 0; pos < t; ++pos) {
      std::size_t sid = (pos >= 1 && pos - 1 < bits.size() && bits[pos - 1]) ? 1 : 0;
      report.per_step.push_back({pos, sid});
      report.max_csid = std::max(report.max_csid, sid);
    }
    return report;
  }
  // Plain: digits are emitted most-significant-first; each one needs the
  // contiguous carry run directly below it.
  for (std::size_t i = t; i > 0; --i) {
    std::size_t pos = i - 1;
    std::size_t run = 0;
    if (pos >= 1 && pos - 1 < bits.size()) {
      // Walk down from the bit feeding this position while carries chain.
      std::size_t j = pos - 1;
      while (bits[j]) {
        ++run;
        if (j == 0) break;
        --j;
      }
    }
    report.per_step.push_back({pos, run});
    report.max_csid = std::max(report.max_csid, run);
  }
  return report;
}

std::size_t classify_carry_chain(const DigitString& a, const DigitString& b) {
  if (a.negative() != b.negative()) {
    throw DomainError("classify_carry_chain requires same-sign operands");
  }
  return add_with_carries(a, b).carries.longest_run();
}

WorstCase csid_worstcase(WorstCaseOp op, std::uint64_t n, std::uint64_t m) {
  if (n < 1 || m < 1) throw DomainError("csid_worstcase requires n >= 1 and m >= 1");
  if (m > n) throw DomainError("csid_worstcase requires m <= n");
  switch (op) {
    case WorstCaseOp::Add:
    case WorstCaseOp::Sub:
      return {WorstCase::Kind::Exact, n};
    case WorstCaseOp::MulDirect:
      return {WorstCase::Kind::Exact, 6 * n * n + n};
    case WorstCaseOp::DivDirect:
      return {WorstCase::Kind::Exact, 2 * n * n - 2 * m * m};
    case WorstCaseOp::MulDecomposed:
    case WorstCaseOp::DivDecomposed:
      return {WorstCase::Kind::Linear, 0};
  }
  throw DomainError("unknown worst-case operation");
}

}  // namespace revorder
