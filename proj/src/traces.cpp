#include "revorder/traces.hpp"

#include <algorithm>
#include <string>

namespace revorder {

std::string_view op_token(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "×";
    case Op::Div: return "÷";
  }
  return "?";
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
  }
  return "?";
}

std::optional<Op> op_from_name(std::string_view name) {
  if (name == "add") return Op::Add;
  if (name == "sub") return Op::Sub;
  if (name == "mul") return Op::Mul;
  if (name == "div") return Op::Div;
  return std::nullopt;
}

std::string Equation::text() const {
  std::string s = a.to_decimal();
  s += op_token(op);
  s += b.to_decimal();
  return s;
}

std::vector<ReversedLiteral> CombineRoundStep::output() const {
  std::vector<ReversedLiteral> out;
  out.reserve(pairs.size() + (passthrough ? 1 : 0));
  for (const CombinePair& p : pairs) out.push_back(p.sum);
  if (passthrough) out.push_back(*passthrough);
  return out;
}

namespace {

void require_positive(const DigitString& x, const char* name) {
  if (x.negative() || x.is_zero()) {
    throw DomainError(std::string(name) + " must be a positive integer");
  }
}

// Trace-context literal text. Division slots render a zero value as the bare
// digit run ("(0)" in compact blocks); everything else takes the r| prefix.
std::string lit_text(const ReversedLiteral& lit, bool bare_zero) {
  if (bare_zero && !lit.negative && lit.is_zero_text()) return lit.digits;
  std::string s = lit.negative ? "-r|" : "r|";
  s += lit.digits;
  return s;
}

// d·10^place as a forward number ("70", "4000", "0").
std::string place_multiplier(std::uint8_t digit, std::size_t place) {
  if (digit == 0) return "0";
  std::string s(1, static_cast<char>('0' + digit));
  s.append(place, '0');
  return s;
}

}  // namespace

Trace gen_add_trace(const DigitString& a, const DigitString& b) {
  AddWithCarries r = add_with_carries(a, b);
  Trace t;
  t.equation = {Op::Add, a, b};
  t.final = r.sum;
  t.steps.push_back(FinalStep{to_reversed_literal(r.sum)});
  return t;
}

Trace gen_sub_trace(const DigitString& a, const DigitString& b) {
  SubWithBorrows r = sub_with_borrows(a, b);
  Trace t;
  t.equation = {Op::Sub, a, b};
  t.final = r.difference;
  t.steps.push_back(FinalStep{to_reversed_literal(r.difference)});
  return t;
}

Trace gen_mul_trace(const DigitString& a, const DigitString& b) {
  require_positive(a, "multiplicand");
  require_positive(b, "multiplier");

  Trace t;
  t.equation = {Op::Mul, a, b};

  DecomposeStep decompose;
  PartialProductsStep partials;
  std::vector<DigitString> values;  // decoded partials, tracked alongside
  std::size_t nb = b.digit_count();
  for (std::size_t j = 0; j < nb; ++j) {
    std::size_t place = nb - 1 - j;
    std::uint8_t d = b.digit_at(place);
    decompose.terms.push_back({d, place});
    if (d == 0) {
      // All-zero literal of the width a copy of the place zeros would give.
      partials.partials.push_back(ReversedLiteral{std::string(place + 1, '0'), false});
      values.push_back(DigitString{});
    } else {
      DigitString v = mul_1d(a, d).product.shifted_up(place);
      partials.partials.push_back(to_reversed_literal(v));
      values.push_back(std::move(v));
    }
  }
  t.steps.push_back(std::move(decompose));
  std::vector<ReversedLiteral> current = partials.partials;
  t.steps.push_back(std::move(partials));

  while (current.size() > 1) {
    CombineRoundStep round;
    std::vector<DigitString> next_values;
    std::vector<ReversedLiteral> next;
    for (std::size_t i = 0; i + 1 < current.size(); i += 2) {
      DigitString sum = add_with_carries(values[i], values[i + 1]).sum;
      ReversedLiteral sum_lit = to_reversed_literal(sum);
      round.pairs.push_back({current[i], current[i + 1], sum_lit});
      next.push_back(std::move(sum_lit));
      next_values.push_back(std::move(sum));
    }
    if (current.size() % 2 == 1) {
      round.passthrough = current.back();
      next.push_back(current.back());
      next_values.push_back(values.back());
    }
    t.steps.push_back(std::move(round));
    current = std::move(next);
    values = std::move(next_values);
  }

  t.final = values[0];
  t.steps.push_back(FinalStep{current[0]});
  return t;
}

Trace gen_div_trace(const DigitString& a, const DigitString& b, const RollbackPlan& plan) {
  require_positive(a, "dividend");
  if (b.is_zero()) throw DomainError("division by zero");
  require_positive(b, "divisor");
  if (DigitString::compare_magnitude(b, a) > 0) {
    throw DomainError("divisor exceeds dividend");
  }
  for (const auto& [index, delta] : plan.deltas) {
    if (delta != 1 && delta != -1) throw DomainError("rollback delta must be +1 or -1");
  }

  std::size_t start = a.digit_count() - b.digit_count();
  if (DigitString::compare_magnitude(b.shifted_up(start), a) > 0) --start;

  Trace t;
  t.equation = {Op::Div, a, b};
  DigitString rem = a;
  std::vector<std::uint8_t> quotient_mags(start + 1, 0);
  std::size_t accepted = 0;

  for (std::size_t i = 0; i <= start; ++i) {
    std::size_t place = start - i;
    unsigned q = 0;
    DigitString product;  // zero
    for (unsigned cand = 1; cand <= 9; ++cand) {
      DigitString p = mul_1d(b, cand).product.shifted_up(place);
      if (DigitString::compare_magnitude(p, rem) <= 0) {
        q = cand;
        product = std::move(p);
      } else {
        break;
      }
    }

    if (auto it = plan.deltas.find(accepted); it != plan.deltas.end()) {
      int wrong = static_cast<int>(q) + it->second;
      if (wrong < 0 || wrong > 9) {
        throw DomainError("injected quotient digit out of range 0..9");
      }
      DigitString wrong_product =
          mul_1d(b, static_cast<unsigned>(wrong)).product.shifted_up(place);
      DigitString wrong_rem = sub_with_borrows(rem, wrong_product).difference;
      t.steps.push_back(DivIterationStep{static_cast<std::uint8_t>(wrong), place,
                                         to_reversed_literal(wrong_product),
                                         to_reversed_literal(wrong_rem), true});
    }

    DigitString rem_after = sub_with_borrows(rem, product).difference;
    t.steps.push_back(DivIterationStep{static_cast<std::uint8_t>(q), place,
                                       to_reversed_literal(product),
                                       to_reversed_literal(rem_after), false});
    quotient_mags[place] = static_cast<std::uint8_t>(q);
    rem = std::move(rem_after);
    ++accepted;
  }

  if (!plan.deltas.empty() && plan.deltas.rbegin()->first >= accepted) {
    throw DomainError("rollback plan targets a nonexistent iteration");
  }

  t.final = DigitString::from_digits(std::move(quotient_mags));
  t.remainder = std::move(rem);
  return t;
}

namespace {

std::string serialize_mul(const Trace& t, Form form) {
  std::string out = t.equation.text();
  const FinalStep* final_step = nullptr;
  for (const Step& s : t.steps) {
    if (const auto* f = std::get_if<FinalStep>(&s)) final_step = f;
  }

  if (t.equation.b.digit_count() == 1) {
    // Basic nD-by-1D form: the reversed product is the whole trace.
    out += "=";
    out += lit_text(final_step->literal, false);
    return out;
  }

  for (const Step& s : t.steps) {
    if (const auto* d = std::get_if<DecomposeStep>(&s)) {
      out += "=";
      for (std::size_t j = 0; j < d->terms.size(); ++j) {
        if (j) out += "+";
        out += t.equation.a.to_decimal();
        out += "×";
        out += place_multiplier(d->terms[j].digit, d->terms[j].place);
      }
    } else if (const auto* p = std::get_if<PartialProductsStep>(&s)) {
      out += "=";
      for (std::size_t j = 0; j < p->partials.size(); ++j) {
        if (j) out += "+";
        out += lit_text(p->partials[j], false);
      }
    } else if (const auto* r = std::get_if<CombineRoundStep>(&s)) {
      std::size_t input_size = r->pairs.size() * 2 + (r->passthrough ? 1 : 0);
      if (form == Form::Verbose && input_size >= 3) {
        out += "=";
        for (std::size_t j = 0; j < r->pairs.size(); ++j) {
          if (j) out += "+";
          out += "(";
          out += lit_text(r->pairs[j].lhs, false);
          out += "+";
          out += lit_text(r->pairs[j].rhs, false);
          out += ")";
        }
        if (r->passthrough) {
          out += "+";
          out += lit_text(*r->passthrough, false);
        }
      }
      out += "=";
      std::vector<ReversedLiteral> sums = r->output();
      for (std::size_t j = 0; j < sums.size(); ++j) {
        if (j) out += "+";
        out += lit_text(sums[j], false);
      }
    }
  }
  out += "=";
  out += t.final.to_decimal();
  return out;
}

std::string serialize_div(const Trace& t, Form form) {
  std::string out = t.equation.text();
  out += "=";

  if (form == Form::Compact) {
    bool first = true;
    for (const Step& s : t.steps) {
      const auto& it = std::get<DivIterationStep>(s);
      if (!first) out += "#";
      first = false;
      out += static_cast<char>('0' + it.quotient_digit);
      out += "R-(";
      out += t.equation.b.to_decimal();
      out += "×";
      out += place_multiplier(it.quotient_digit, it.place);
      out += ")(";
      out += lit_text(it.product, true);
      out += ")(";
      out += lit_text(it.remainder, true);
      out += ")";
      if (it.rolled_back) out += "W";
    }
  } else {
    std::string minuend = t.equation.a.to_decimal();
    std::string accepted_digits;
    bool first = true;
    for (const Step& s : t.steps) {
      const auto& it = std::get<DivIterationStep>(s);
      std::string prefix = accepted_digits + static_cast<char>('0' + it.quotient_digit);
      if (!first) out += "=";
      first = false;
      out += prefix;
      out += "R(";
      out += minuend;
      out += "-";
      out += t.equation.b.to_decimal();
      out += "×";
      out += place_multiplier(it.quotient_digit, it.place);
      out += ")=";
      out += prefix;
      out += "R(";
      out += minuend;
      out += "-";
      out += lit_text(it.product, true);
      out += ")=";
      out += prefix;
      out += "R(";
      out += lit_text(it.remainder, true);
      out += ")";
      if (it.rolled_back) {
        out += "W";
      } else {
        minuend = lit_text(it.remainder, true);
        accepted_digits = std::move(prefix);
      }
    }
  }

  out += "=";
  out += t.final.to_decimal();
  if (t.remainder && !t.remainder->is_zero()) {
    out += "R";
    out += t.remainder->to_decimal();
  }
  return out;
}

}  // namespace

std::string serialize(const Trace& trace, Form form) {
  switch (trace.equation.op) {
    case Op::Add:
    case Op::Sub: {
      std::string out = trace.equation.text();
      out += "=";
      out += lit_text(std::get<FinalStep>(trace.steps.back()).literal, false);
      return out;
    }
    case Op::Mul:
      return serialize_mul(trace, form);
    case Op::Div:
      return serialize_div(trace, form);
  }
  throw DomainError("unknown operation");
}

}  // namespace revorder
