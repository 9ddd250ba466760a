#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "revorder/digits.hpp"

namespace revorder {

enum class Op { Add, Sub, Mul, Div };

/// Canonical operator token ("+", "-", "×", "÷").
std::string_view op_token(Op op);

struct Equation {
  Op op = Op::Add;
  DigitString a;
  DigitString b;

  std::string text() const;  // "948÷12", canonical, no '='

  bool operator==(const Equation&) const = default;
};

enum class Form { Verbose, Compact };

/// One a×(digit·10^place) term of a multiplication decomposition.
struct MulTerm {
  std::uint8_t digit = 0;
  std::size_t place = 0;

  bool operator==(const MulTerm&) const = default;
};

/// Splits the second operand by decimal places, most significant first.
struct DecomposeStep {
  std::vector<MulTerm> terms;

  bool operator==(const DecomposeStep&) const = default;
};

/// The reversed sub-products, one per decomposition term; a zero partial at
/// place k is kept as an all-zero literal of width k+1.
struct PartialProductsStep {
  std::vector<ReversedLiteral> partials;

  bool operator==(const PartialProductsStep&) const = default;
};

struct CombinePair {
  ReversedLiteral lhs;
  ReversedLiteral rhs;
  ReversedLiteral sum;

  bool operator==(const CombinePair&) const = default;
};

/// One halving round: adjacent pairs left to right; an unpaired last element
/// passes through unchanged.
struct CombineRoundStep {
  std::vector<CombinePair> pairs;
  std::optional<ReversedLiteral> passthrough;

  std::vector<ReversedLiteral> output() const;

  bool operator==(const CombineRoundStep&) const = default;
};

/// One long-division step: quotient_digit at 10^place, the reversed product
/// b×q·10^place, and the reversed running remainder after subtracting it.
/// A rolled_back step (serialized 'W') recorded an invalid remainder and is
/// followed by a replacement at the same place.
struct DivIterationStep {
  std::uint8_t quotient_digit = 0;
  std::size_t place = 0;
  ReversedLiteral product;
  ReversedLiteral remainder;
  bool rolled_back = false;

  bool operator==(const DivIterationStep&) const = default;
};

struct FinalStep {
  ReversedLiteral literal;

  bool operator==(const FinalStep&) const = default;
};

using Step = std::variant<DecomposeStep, PartialProductsStep, CombineRoundStep,
                          DivIterationStep, FinalStep>;

/// A structured reasoning trace for one equation. Replaying the steps with
/// exact arithmetic reproduces final (and remainder, for division).
struct Trace {
  Equation equation;
  std::vector<Step> steps;
  DigitString final;
  std::optional<DigitString> remainder;  // division only

  bool operator==(const Trace&) const = default;
};

/// Quotient misestimation schedule for division generation: accepted
/// iteration index (0 = most significant quotient digit) to ±1. The injected
/// digit must stay within 0..9.
struct RollbackPlan {
  std::map<std::size_t, int> deltas;

  bool empty() const { return deltas.empty(); }

  bool operator==(const RollbackPlan&) const = default;
};

Trace gen_add_trace(const DigitString& a, const DigitString& b);
Trace gen_sub_trace(const DigitString& a, const DigitString& b);

/// Requires positive operands. Single-digit multipliers keep the basic
/// nD-by-1D form; larger ones decompose, take partial products, and combine
/// pairwise until one literal remains.
Trace gen_mul_trace(const DigitString& a, const DigitString& b);

/// Long division with exact quotient digits; the plan injects ±1
/// misestimations that are flagged as rolled back and corrected in place.
/// Requires 0 < b <= a; throws DomainError on b = 0, b > a, out-of-range
/// injected digits, or plan entries beyond the last iteration.
Trace gen_div_trace(const DigitString& a, const DigitString& b,
                    const RollbackPlan& plan = {});

/// Renders the canonical surface form: no interior whitespace, tokens '×',
/// '÷', 'R', '-', '#', 'W', 'r|', '='. Verbose is the full equation chain;
/// Compact drops regrouping segments and condenses division iterations to
/// "qR-(b×q·10^k)(product)(remainder)" blocks separated by '#'.
std::string serialize(const Trace& trace, Form form);

/// Parses either surface form (auto-detected) back into a structured trace;
/// parse(serialize(t, f)) == t for both forms. Whitespace between tokens is
/// tolerated, as are the operator aliases '*' and '/'. Throws ParseError
/// with a byte offset on malformed input.
Trace parse(std::string_view text);

struct VerifyResult {
  bool valid = true;
  std::size_t step_index = 0;
  std::string expected;
  std::string found;
  std::string message;

  explicit operator bool() const { return valid; }

  static VerifyResult ok() { return {}; }
  static VerifyResult fail(std::size_t step, std::string expected, std::string found,
                           std::string message) {
    return {false, step, std::move(expected), std::move(found), std::move(message)};
  }
};

/// Checks every step with exact arithmetic: decomposition shape, partial
/// products, pairwise sums, division products/remainders, rollback legality,
/// and the final decode. Invalid traces are reported, not thrown.
VerifyResult verify(const Trace& trace);

/// Parses "a op b" with op one of +, -, ×, ÷ (aliases '*', '/' accepted).
Equation parse_equation(std::string_view text);

/// Lowercase identifier form: "add", "sub", "mul", "div".
std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);

}  // namespace revorder
