#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "revorder/traces.hpp"

namespace revorder {

namespace {

/// Byte-offset cursor over the input. Every token match skips leading
/// whitespace, so the surface forms stay whitespace-tolerant while offsets
/// in errors point at real input positions.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t pos) { pos_ = pos; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool peek(std::string_view token) {
    skip_ws();
    return text_.substr(pos_).starts_with(token);
  }

  bool match(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token, const char* what) {
    if (!match(token)) {
      throw ParseError(std::string("expected ") + what, pos_);
    }
  }

  /// Contiguous run of ASCII digits, at least one.
  std::string digit_run(const char* what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError(std::string("expected ") + what, start);
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint8_t digit(const char* what) {
    skip_ws();
    if (pos_ < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      return static_cast<std::uint8_t>(text_[pos_++] - '0');
    }
    throw ParseError(std::string("expected ") + what, pos_);
  }

  bool match_minus() { return match("-") || match("−"); }

  DigitString number(const char* what) {
    skip_ws();
    bool neg = match_minus();
    DigitString v = DigitString::from_decimal(digit_run(what));
    return neg ? v.negated() : v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

void expect_mul(Scanner& s) {
  if (!s.match("×") && !s.match("*")) {
    throw ParseError("expected '×'", s.pos());
  }
}

/// Reversed digits behind "r|" (optionally negative), or — where a division
/// slot allows it — a bare zero-valued digit run.
ReversedLiteral literal(Scanner& s, bool allow_bare_zero) {
  s.skip_ws();
  std::size_t at = s.pos();
  bool neg = s.match_minus();
  if (s.match("r|")) {
    return {s.digit_run("reversed digits"), neg};
  }
  if (neg || !allow_bare_zero) {
    throw ParseError("expected an r| literal", at);
  }
  std::string run = s.digit_run("digits");
  if (run.find_first_not_of('0') != std::string::npos) {
    throw ParseError("bare literal must be zero-valued", at);
  }
  return {std::move(run), false};
}

/// Division/decomposition slot rendering of a literal, used to re-derive the
/// text a later segment must echo.
std::string slot_text(const ReversedLiteral& lit) {
  if (!lit.negative && lit.is_zero_text()) return lit.digits;
  return (lit.negative ? "-r|" : "r|") + lit.digits;
}

struct PlaceMultiplier {
  std::uint8_t digit = 0;
  std::optional<std::size_t> place;  // unknowable for the bare "0" form
};

/// "d000..." → digit d at place = number of zeros; "0" alone leaves the
/// place open for later resolution.
PlaceMultiplier parse_place_multiplier(const std::string& run, std::size_t at) {
  if (run == "0") return {0, std::nullopt};
  if (run[0] == '0') {
    throw ParseError("place multiplier has a leading zero", at);
  }
  for (std::size_t i = 1; i < run.size(); ++i) {
    if (run[i] != '0') {
      throw ParseError("place multiplier must be one digit followed by zeros", at);
    }
  }
  return {static_cast<std::uint8_t>(run[0] - '0'), run.size() - 1};
}

Op scan_op(Scanner& s) {
  if (s.match("+")) return Op::Add;
  if (s.match("×") || s.match("*")) return Op::Mul;
  if (s.match("÷") || s.match("/")) return Op::Div;
  if (s.match_minus()) return Op::Sub;
  throw ParseError("expected an operator (+, -, ×, ÷)", s.pos());
}

void parse_mul_body(Scanner& s, Trace& t) {
  const DigitString& a = t.equation.a;
  const DigitString& b = t.equation.b;
  std::size_t nb = b.digit_count();

  if (nb == 1) {
    ReversedLiteral lit = literal(s, false);
    t.steps.push_back(DecomposeStep{{{b.digit_at(0), 0}}});
    t.steps.push_back(PartialProductsStep{{lit}});
    t.final = from_reversed_literal(lit);
    t.steps.push_back(FinalStep{std::move(lit)});
    return;
  }

  DecomposeStep dec;
  for (std::size_t j = 0; j < nb; ++j) {
    if (j) s.expect("+", "'+'");
    std::size_t at = s.pos();
    if (!(s.number("multiplicand") == a)) {
      throw ParseError("decomposition multiplicand differs from the left operand", at);
    }
    expect_mul(s);
    at = s.pos();
    PlaceMultiplier m = parse_place_multiplier(s.digit_run("place multiplier"), at);
    std::size_t place = nb - 1 - j;
    if (m.place && *m.place != place) {
      throw ParseError("place multiplier out of order", at);
    }
    dec.terms.push_back({m.digit, place});
  }
  s.expect("=", "'='");

  PartialProductsStep parts;
  for (std::size_t j = 0; j < nb; ++j) {
    if (j) s.expect("+", "'+'");
    parts.partials.push_back(literal(s, false));
  }
  std::vector<ReversedLiteral> current = parts.partials;
  t.steps.push_back(std::move(dec));
  t.steps.push_back(std::move(parts));

  while (current.size() > 1) {
    s.expect("=", "'='");
    if (s.peek("(")) {
      // Verbose regrouping echo of the running list; validated, not stored.
      for (std::size_t i = 0; i + 1 < current.size(); i += 2) {
        if (i) s.expect("+", "'+'");
        s.expect("(", "'('");
        std::size_t at = s.pos();
        if (literal(s, false) != current[i]) {
          throw ParseError("regrouped literal does not match the running list", at);
        }
        s.expect("+", "'+'");
        at = s.pos();
        if (literal(s, false) != current[i + 1]) {
          throw ParseError("regrouped literal does not match the running list", at);
        }
        s.expect(")", "')'");
      }
      if (current.size() % 2 == 1) {
        s.expect("+", "'+'");
        std::size_t at = s.pos();
        if (literal(s, false) != current.back()) {
          throw ParseError("regrouped literal does not match the running list", at);
        }
      }
      s.expect("=", "'='");
    }

    std::size_t want = (current.size() + 1) / 2;
    std::vector<ReversedLiteral> outputs;
    std::size_t last_at = s.pos();
    for (std::size_t i = 0; i < want; ++i) {
      if (i) s.expect("+", "'+'");
      last_at = s.pos();
      outputs.push_back(literal(s, false));
    }

    CombineRoundStep round;
    for (std::size_t i = 0; i + 1 < current.size(); i += 2) {
      round.pairs.push_back({current[i], current[i + 1], outputs[i / 2]});
    }
    if (current.size() % 2 == 1) {
      if (outputs.back() != current.back()) {
        throw ParseError("unpaired literal must carry over unchanged", last_at);
      }
      round.passthrough = current.back();
    }
    t.steps.push_back(std::move(round));
    current = std::move(outputs);
  }

  s.expect("=", "'='");
  t.final = s.number("final value");
  t.steps.push_back(FinalStep{std::move(current[0])});
}

struct RawBlock {
  std::uint8_t q = 0;
  std::optional<std::size_t> place;
  ReversedLiteral product;
  ReversedLiteral remainder;
  bool w = false;
  std::size_t off = 0;
};

/// Quotient places descend one per accepted iteration and end at 0, so a
/// backward pass pins every block, including "×0" multipliers that leave the
/// place textually open. A rolled-back block shares the place of the retry
/// that must follow it.
void resolve_places(std::vector<RawBlock>& blocks, Trace& t) {
  if (blocks.back().w) {
    throw ParseError("rolled-back iteration has no retry", blocks.back().off);
  }
  std::size_t next_accepted = 0;
  std::size_t last_assigned = 0;
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    if (it->w) {
      if (it->place && *it->place != last_assigned) {
        throw ParseError("rolled-back place differs from its retry", it->off);
      }
      it->place = last_assigned;
    } else {
      if (it->place && *it->place != next_accepted) {
        throw ParseError("quotient place out of sequence", it->off);
      }
      it->place = next_accepted;
      last_assigned = next_accepted;
      ++next_accepted;
    }
  }
  for (RawBlock& blk : blocks) {
    t.steps.push_back(DivIterationStep{blk.q, *blk.place, std::move(blk.product),
                                       std::move(blk.remainder), blk.w});
  }
}

void parse_div_tail(Scanner& s, Trace& t) {
  t.final = s.number("final quotient");
  if (s.match("R")) {
    t.remainder = s.number("final remainder");
  } else {
    t.remainder = DigitString{};
  }
}

void parse_div_compact(Scanner& s, Trace& t) {
  const DigitString& b = t.equation.b;
  std::vector<RawBlock> blocks;
  do {
    RawBlock blk;
    s.skip_ws();
    blk.off = s.pos();
    blk.q = s.digit("quotient digit");
    s.expect("R", "'R'");
    if (!s.match_minus()) throw ParseError("expected '-'", s.pos());
    s.expect("(", "'('");
    std::size_t at = s.pos();
    if (!(s.number("divisor") == b)) {
      throw ParseError("block divisor differs from the right operand", at);
    }
    expect_mul(s);
    at = s.pos();
    PlaceMultiplier m = parse_place_multiplier(s.digit_run("place multiplier"), at);
    if (m.digit != blk.q) {
      throw ParseError("multiplier digit disagrees with the quotient digit", at);
    }
    blk.place = m.place;
    s.expect(")", "')'");
    s.expect("(", "'('");
    blk.product = literal(s, true);
    s.expect(")", "')'");
    s.expect("(", "'('");
    blk.remainder = literal(s, true);
    s.expect(")", "')'");
    blk.w = s.match("W");
    blocks.push_back(std::move(blk));
  } while (s.match("#"));
  s.expect("=", "'='");
  parse_div_tail(s, t);
  resolve_places(blocks, t);
}

std::string minuend_text(Scanner& s) {
  if (s.match("r|")) return "r|" + s.digit_run("reversed digits");
  return s.digit_run("minuend");
}

void parse_div_verbose(Scanner& s, Trace& t) {
  const DigitString& b = t.equation.b;
  std::vector<RawBlock> blocks;
  std::string minuend = t.equation.a.to_decimal();
  std::string accepted;

  for (;;) {
    RawBlock blk;
    s.skip_ws();
    blk.off = s.pos();
    std::string prefix = s.digit_run("quotient prefix");
    s.expect("R", "'R'");
    s.expect("(", "'('");
    std::size_t at = s.pos();
    if (minuend_text(s) != minuend) {
      throw ParseError("minuend does not continue the previous remainder", at);
    }
    if (!s.match_minus()) throw ParseError("expected '-'", s.pos());
    at = s.pos();
    if (!(s.number("divisor") == b)) {
      throw ParseError("divisor differs from the right operand", at);
    }
    expect_mul(s);
    at = s.pos();
    PlaceMultiplier m = parse_place_multiplier(s.digit_run("place multiplier"), at);
    blk.q = m.digit;
    blk.place = m.place;
    s.expect(")", "')'");
    if (prefix != accepted + static_cast<char>('0' + blk.q)) {
      throw ParseError("quotient prefix does not extend the accepted digits", blk.off);
    }

    s.expect("=", "'='");
    at = s.pos();
    if (s.digit_run("quotient prefix") != prefix) {
      throw ParseError("quotient prefix changed between segments", at);
    }
    s.expect("R", "'R'");
    s.expect("(", "'('");
    at = s.pos();
    if (minuend_text(s) != minuend) {
      throw ParseError("minuend does not continue the previous remainder", at);
    }
    if (!s.match_minus()) throw ParseError("expected '-'", s.pos());
    blk.product = literal(s, true);
    s.expect(")", "')'");

    s.expect("=", "'='");
    at = s.pos();
    if (s.digit_run("quotient prefix") != prefix) {
      throw ParseError("quotient prefix changed between segments", at);
    }
    s.expect("R", "'R'");
    s.expect("(", "'('");
    blk.remainder = literal(s, true);
    s.expect(")", "')'");
    blk.w = s.match("W");
    if (!blk.w) {
      accepted += static_cast<char>('0' + blk.q);
      minuend = slot_text(blk.remainder);
    }
    blocks.push_back(std::move(blk));

    s.expect("=", "'='");
    std::size_t save = s.pos();
    bool more = false;
    try {
      s.digit_run("lookahead");
      if (s.match("R") && s.peek("(")) more = true;
    } catch (const ParseError&) {
    }
    s.set_pos(save);
    if (!more) break;
  }

  parse_div_tail(s, t);
  resolve_places(blocks, t);
}

}  // namespace

Equation parse_equation(std::string_view text) {
  Scanner s(text);
  Equation eq;
  eq.a = s.number("left operand");
  eq.op = scan_op(s);
  eq.b = s.number("right operand");
  if (!s.at_end()) {
    throw ParseError("unexpected trailing characters", s.pos());
  }
  return eq;
}

Trace parse(std::string_view text) {
  Scanner s(text);
  Trace t;
  t.equation.a = s.number("left operand");
  t.equation.op = scan_op(s);
  t.equation.b = s.number("right operand");
  s.expect("=", "'='");

  switch (t.equation.op) {
    case Op::Add:
    case Op::Sub: {
      ReversedLiteral lit = literal(s, false);
      t.final = from_reversed_literal(lit);
      t.steps.push_back(FinalStep{std::move(lit)});
      break;
    }
    case Op::Mul:
      parse_mul_body(s, t);
      break;
    case Op::Div: {
      std::size_t save = s.pos();
      s.digit_run("quotient digit");
      s.expect("R", "'R'");
      bool verbose = s.peek("(");
      s.set_pos(save);
      if (verbose) {
        parse_div_verbose(s, t);
      } else {
        parse_div_compact(s, t);
      }
      break;
    }
  }

  if (!s.at_end()) {
    throw ParseError("unexpected trailing characters", s.pos());
  }
  return t;
}

}  // namespace revorder
