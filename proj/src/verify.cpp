#include <string>
#include <variant>
#include <vector>

#include "revorder/traces.hpp"

namespace revorder {

namespace {

std::string dec(const DigitString& x) { return x.to_decimal(); }

VerifyResult malformed(std::size_t step, std::string message) {
  return VerifyResult::fail(step, "", "", std::move(message));
}

VerifyResult verify_addsub(const Trace& t) {
  DigitString want = t.equation.op == Op::Add
                         ? add_with_carries(t.equation.a, t.equation.b).sum
                         : sub_with_borrows(t.equation.a, t.equation.b).difference;
  if (t.steps.size() != 1 || !std::holds_alternative<FinalStep>(t.steps[0])) {
    return malformed(0, "expected exactly one final-literal step");
  }
  DigitString got = from_reversed_literal(std::get<FinalStep>(t.steps[0]).literal);
  if (!(got == want)) {
    return VerifyResult::fail(0, dec(want), dec(got),
                              "final literal decodes to the wrong value");
  }
  if (!(t.final == want)) {
    return VerifyResult::fail(0, dec(want), dec(t.final), "stored final value is wrong");
  }
  return VerifyResult::ok();
}

VerifyResult verify_mul(const Trace& t) {
  const DigitString& a = t.equation.a;
  const DigitString& b = t.equation.b;
  if (a.negative() || a.is_zero() || b.negative() || b.is_zero()) {
    return malformed(0, "multiplication traces require positive operands");
  }
  std::size_t nb = b.digit_count();
  std::size_t i = 0;

  if (i >= t.steps.size() || !std::holds_alternative<DecomposeStep>(t.steps[i])) {
    return malformed(i, "expected a decomposition step");
  }
  const auto& dec_step = std::get<DecomposeStep>(t.steps[i]);
  if (dec_step.terms.size() != nb) {
    return VerifyResult::fail(i, std::to_string(nb) + " terms",
                              std::to_string(dec_step.terms.size()) + " terms",
                              "decomposition must cover every digit of the multiplier");
  }
  for (std::size_t j = 0; j < nb; ++j) {
    const MulTerm& term = dec_step.terms[j];
    std::size_t place = nb - 1 - j;
    if (term.place != place) {
      return VerifyResult::fail(i, std::to_string(place), std::to_string(term.place),
                                "decomposition places must descend to the units");
    }
    if (term.digit != b.digit_at(place)) {
      return VerifyResult::fail(i, std::to_string(b.digit_at(place)),
                                std::to_string(term.digit),
                                "decomposition digit differs from the multiplier");
    }
  }
  ++i;

  if (i >= t.steps.size() || !std::holds_alternative<PartialProductsStep>(t.steps[i])) {
    return malformed(i, "expected a partial-products step");
  }
  const auto& parts = std::get<PartialProductsStep>(t.steps[i]);
  if (parts.partials.size() != nb) {
    return malformed(i, "one partial product per decomposition term required");
  }
  std::vector<ReversedLiteral> lits;
  std::vector<DigitString> values;
  for (std::size_t j = 0; j < nb; ++j) {
    const MulTerm& term = dec_step.terms[j];
    DigitString want = mul_1d(a, term.digit).product.shifted_up(term.place);
    DigitString got = from_reversed_literal(parts.partials[j]);
    if (!(got == want)) {
      return VerifyResult::fail(i, dec(want), dec(got), "partial product is wrong");
    }
    lits.push_back(parts.partials[j]);
    values.push_back(std::move(got));
  }
  ++i;

  while (values.size() > 1) {
    if (i >= t.steps.size() || !std::holds_alternative<CombineRoundStep>(t.steps[i])) {
      return malformed(i, "expected a pairwise combination round");
    }
    const auto& round = std::get<CombineRoundStep>(t.steps[i]);
    bool carry_over = values.size() % 2 == 1;
    if (round.pairs.size() != values.size() / 2 ||
        round.passthrough.has_value() != carry_over) {
      return malformed(i, "combination round does not match the running list");
    }
    std::vector<ReversedLiteral> next_lits;
    std::vector<DigitString> next_values;
    for (std::size_t k = 0; k < round.pairs.size(); ++k) {
      const CombinePair& pair = round.pairs[k];
      if (pair.lhs != lits[2 * k] || pair.rhs != lits[2 * k + 1]) {
        return malformed(i, "combination inputs do not match the running list");
      }
      DigitString want = add_with_carries(values[2 * k], values[2 * k + 1]).sum;
      DigitString got = from_reversed_literal(pair.sum);
      if (!(got == want)) {
        return VerifyResult::fail(i, dec(want), dec(got), "pairwise sum is wrong");
      }
      next_lits.push_back(pair.sum);
      next_values.push_back(std::move(got));
    }
    if (carry_over) {
      if (*round.passthrough != lits.back()) {
        return malformed(i, "unpaired literal must carry over unchanged");
      }
      next_lits.push_back(lits.back());
      next_values.push_back(values.back());
    }
    lits = std::move(next_lits);
    values = std::move(next_values);
    ++i;
  }

  if (i >= t.steps.size() || !std::holds_alternative<FinalStep>(t.steps[i])) {
    return malformed(i, "expected the final literal");
  }
  DigitString got = from_reversed_literal(std::get<FinalStep>(t.steps[i]).literal);
  if (!(got == values[0])) {
    return VerifyResult::fail(i, dec(values[0]), dec(got),
                              "final literal does not match the last sum");
  }
  DigitString want = mul(a, b);
  if (!(t.final == want)) {
    return VerifyResult::fail(i, dec(want), dec(t.final), "stored final value is wrong");
  }
  if (i + 1 != t.steps.size()) {
    return malformed(i + 1, "unexpected steps after the final literal");
  }
  return VerifyResult::ok();
}

VerifyResult verify_div(const Trace& t) {
  const DigitString& a = t.equation.a;
  const DigitString& b = t.equation.b;
  if (a.negative() || a.is_zero() || b.negative() || b.is_zero()) {
    return malformed(0, "division traces require positive operands");
  }
  if (DigitString::compare_magnitude(b, a) > 0) {
    return malformed(0, "divisor exceeds dividend");
  }

  std::size_t start = a.digit_count() - b.digit_count();
  if (DigitString::compare_magnitude(b.shifted_up(start), a) > 0) --start;

  DigitString rem = a;
  std::size_t place = start;
  bool done = false;
  std::vector<std::uint8_t> qmags(start + 1, 0);

  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (!std::holds_alternative<DivIterationStep>(t.steps[i])) {
      return malformed(i, "division traces hold only division iterations");
    }
    if (done) {
      return malformed(i, "iterations continue past the units place");
    }
    const auto& it = std::get<DivIterationStep>(t.steps[i]);
    if (it.place != place) {
      return VerifyResult::fail(i, std::to_string(place), std::to_string(it.place),
                                "quotient place out of sequence");
    }
    if (it.quotient_digit > 9) {
      return malformed(i, "quotient digit exceeds 9");
    }

    DigitString prod_want = mul_1d(b, it.quotient_digit).product.shifted_up(place);
    DigitString prod_got = from_reversed_literal(it.product);
    if (!(prod_got == prod_want)) {
      return VerifyResult::fail(i, dec(prod_want), dec(prod_got),
                                "trial product is wrong");
    }
    DigitString rem_want = sub_with_borrows(rem, prod_want).difference;
    DigitString rem_got = from_reversed_literal(it.remainder);
    if (!(rem_got == rem_want)) {
      return VerifyResult::fail(i, dec(rem_want), dec(rem_got),
                                "iteration remainder is wrong");
    }

    DigitString bound = b.shifted_up(place);
    bool fits = !rem_want.negative() &&
                DigitString::compare_magnitude(rem_want, bound) < 0;
    if (it.rolled_back) {
      if (fits) {
        return VerifyResult::fail(i, "a remainder outside [0, divisor·10^place)",
                                  dec(rem_want),
                                  "rolled-back iteration has a valid remainder");
      }
      if (i + 1 >= t.steps.size() ||
          !std::holds_alternative<DivIterationStep>(t.steps[i + 1])) {
        return malformed(i, "rolled-back iteration has no retry");
      }
      const auto& retry = std::get<DivIterationStep>(t.steps[i + 1]);
      if (retry.place != it.place || retry.quotient_digit == it.quotient_digit) {
        return malformed(i + 1, "retry must stay at the same place with a new digit");
      }
    } else {
      if (!fits) {
        return VerifyResult::fail(i, "a remainder in [0, divisor·10^place)",
                                  dec(rem_want), "iteration remainder out of range");
      }
      qmags[place] = it.quotient_digit;
      rem = std::move(rem_want);
      if (place == 0) {
        done = true;
      } else {
        --place;
      }
    }
  }

  std::size_t last = t.steps.empty() ? 0 : t.steps.size() - 1;
  if (!done) {
    return malformed(last, "iterations stop before the units place");
  }
  DigitString quotient = DigitString::from_digits(std::move(qmags));
  if (!(t.final == quotient)) {
    return VerifyResult::fail(last, dec(quotient), dec(t.final),
                              "final quotient is wrong");
  }
  if (!t.remainder) {
    return malformed(last, "missing final remainder");
  }
  if (!(*t.remainder == rem)) {
    return VerifyResult::fail(last, dec(rem), dec(*t.remainder),
                              "final remainder is wrong");
  }
  return VerifyResult::ok();
}

}  // namespace

VerifyResult verify(const Trace& trace) {
  try {
    switch (trace.equation.op) {
      case Op::Add:
      case Op::Sub:
        return verify_addsub(trace);
      case Op::Mul:
        return verify_mul(trace);
      case Op::Div:
        return verify_div(trace);
    }
    return malformed(0, "unknown operation");
  } catch (const ParseError& e) {
    return malformed(0, std::string("unreadable literal: ") + e.what());
  }
}

}  // namespace revorder
