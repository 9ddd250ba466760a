#include "revorder/tokens.hpp"

#include <cctype>
#include <vector>

namespace revorder {

std::size_t token_count(std::string_view text) {
  std::size_t codepoints = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++codepoints;
  }
  std::size_t markers = 0;
  for (std::size_t at = text.find("r|"); at != std::string_view::npos;
       at = text.find("r|", at + 2)) {
    ++markers;
  }
  return codepoints - markers;
}

TokenCost token_cost(const Trace& trace, Form form) {
  TokenCost cost;
  cost.total = token_count(serialize(trace, form));
  std::string bare = trace.equation.text();
  bare += "=";
  bare += trace.final.to_decimal();
  if (trace.equation.op == Op::Div && trace.remainder && !trace.remainder->is_zero()) {
    bare += "R";
    bare += trace.remainder->to_decimal();
  }
  cost.bare = token_count(bare);
  return cost;
}

namespace {

struct ChainTerm {
  Op op = Op::Add;  // operator joining this term to the running value
  DigitString value;
};

std::size_t skip_ws(std::string_view text, std::size_t pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  return pos;
}

DigitString scan_term(std::string_view text, std::size_t& pos, bool allow_sign) {
  pos = skip_ws(text, pos);
  bool neg = false;
  if (allow_sign && pos < text.size() && text[pos] == '-') {
    neg = true;
    ++pos;
    pos = skip_ws(text, pos);
  }
  std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == start) throw ParseError("expected a number", start);
  DigitString v = DigitString::from_decimal(text.substr(start, pos - start));
  return neg ? v.negated() : v;
}

}  // namespace

std::string rewrite_equation_chain(std::string_view text, std::string_view delimiter) {
  std::size_t pos = 0;
  DigitString first = scan_term(text, pos, true);
  std::vector<ChainTerm> rest;

  for (;;) {
    pos = skip_ws(text, pos);
    if (pos >= text.size()) break;
    ChainTerm term;
    std::string_view tail = text.substr(pos);
    if (tail.starts_with("+")) {
      term.op = Op::Add;
      pos += 1;
    } else if (tail.starts_with("-") || tail.starts_with("−")) {
      term.op = Op::Sub;
      pos += tail.starts_with("-") ? 1 : 3;
    } else if (tail.starts_with("×") || tail.starts_with("*")) {
      term.op = Op::Mul;
      pos += tail.starts_with("*") ? 1 : 2;
    } else if (tail.starts_with("÷") || tail.starts_with("/")) {
      throw ParseError("division chains have no reversed rewrite", pos);
    } else {
      throw ParseError("expected an operator (+, -, ×)", pos);
    }
    term.value = scan_term(text, pos, false);
    rest.push_back(std::move(term));
  }
  if (rest.empty()) {
    throw ParseError("expected an operator (+, -, ×)", pos);
  }

  std::string out = first.to_decimal();
  for (const ChainTerm& t : rest) {
    out += op_token(t.op);
    out += t.value.to_decimal();
  }

  DigitString acc = std::move(first);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    switch (rest[i].op) {
      case Op::Add: acc = add_with_carries(acc, rest[i].value).sum; break;
      case Op::Sub: acc = sub_with_borrows(acc, rest[i].value).difference; break;
      case Op::Mul: acc = mul(acc, rest[i].value); break;
      case Op::Div: break;  // unreachable
    }
    out += "=";
    if (acc.negative()) out += "-";
    out += delimiter;
    out += to_reversed_literal(acc).digits;
    out += delimiter;
    for (std::size_t k = i + 1; k < rest.size(); ++k) {
      out += op_token(rest[k].op);
      out += rest[k].value.to_decimal();
    }
  }
  out += "=";
  out += acc.to_decimal();
  return out;
}

}  // namespace revorder
