#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revorder/errors.hpp"

namespace revorder {

/// Signed arbitrary-precision decimal integer stored as a little-endian digit
/// list: mags()[0] is the units place. Canonical form has no high-order zero
/// digits, and zero is always positive with a single 0 digit.
class DigitString {
 public:
  DigitString() = default;  // zero

  /// Parses an optionally signed decimal string ("-00123" is accepted and
  /// canonicalized). Throws ParseError on empty input or non-digit characters.
  static DigitString from_decimal(std::string_view text);
  static DigitString from_uint(std::uint64_t value);
  static DigitString from_int(std::int64_t value);
  /// Takes little-endian digits (each 0..9) and canonicalizes them.
  static DigitString from_digits(std::vector<std::uint8_t> mags, bool negative = false);

  bool negative() const { return negative_; }
  bool is_zero() const { return mags_.size() == 1 && mags_[0] == 0; }
  const std::vector<std::uint8_t>& mags() const { return mags_; }
  std::size_t digit_count() const { return mags_.size(); }
  /// Digit at 10^place, 0 beyond the top.
  std::uint8_t digit_at(std::size_t place) const {
    return place < mags_.size() ? mags_[place] : 0;
  }

  std::string to_decimal() const;
  DigitString abs() const;
  DigitString negated() const;
  DigitString shifted_up(std::size_t places) const;  // value * 10^places

  /// -1/0/+1 comparison of |a| vs |b|.
  static int compare_magnitude(const DigitString& a, const DigitString& b);

  bool operator==(const DigitString&) const = default;
  std::strong_ordering operator<=>(const DigitString& other) const;

 private:
  std::vector<std::uint8_t> mags_{0};
  bool negative_ = false;

  void canonicalize();
};

/// Per-position carry (or borrow) amounts of one schoolbook column pass,
/// little-endian: values[i] is the carry out of position i. Addition and
/// subtraction always produce 0/1 entries; single-digit multiplication can
/// carry up to 8 per column.
struct CarryTrace {
  std::vector<std::uint8_t> values;

  /// Length of the longest run of consecutive nonzero entries.
  std::size_t longest_run() const;

  bool operator==(const CarryTrace&) const = default;
};
using BorrowTrace = CarryTrace;

struct AddWithCarries {
  DigitString sum;
  CarryTrace carries;
};

struct SubWithBorrows {
  DigitString difference;
  BorrowTrace borrows;
};

struct MulByDigit {
  DigitString product;
  CarryTrace carries;
};

/// Exact a+b. For same-sign operands the trace holds the schoolbook column
/// carries of the magnitude addition; mixed signs delegate to subtraction and
/// the trace holds the borrows of |larger| - |smaller|.
AddWithCarries add_with_carries(const DigitString& a, const DigitString& b);

/// Exact a-b; the result may be negative. Same-sign operands produce the
/// borrow trace of the larger magnitude minus the smaller; mixed signs
/// delegate to addition of magnitudes.
SubWithBorrows sub_with_borrows(const DigitString& a, const DigitString& b);

/// Exact a*d for a single digit d in 0..9, with the per-column carries of
/// schoolbook single-digit multiplication. Throws DomainError if d > 9.
MulByDigit mul_1d(const DigitString& a, unsigned digit);

/// Plain full product, schoolbook partials. Signs multiply through.
DigitString mul(const DigitString& a, const DigitString& b);

/// A digit string written least-significant-first, optionally zero-padded at
/// its most-significant end. The standalone text form places the sign marker
/// after the digits ("21-" for -12); trace serialization renders the sign
/// before the "r|" prefix instead.
struct ReversedLiteral {
  std::string digits;  // '0'..'9' only, index 0 = units
  bool negative = false;

  std::size_t pad_len() const { return digits.size(); }
  bool is_zero_text() const {
    return digits.find_first_not_of('0') == std::string::npos;
  }
  std::string text() const { return negative ? digits + "-" : digits; }

  bool operator==(const ReversedLiteral&) const = default;
};

/// Emits x least-significant-digit-first, zero-padded up to pad_len when
/// given. Throws DomainError if pad_len is smaller than the significant digit
/// count.
ReversedLiteral to_reversed_literal(const DigitString& x,
                                    std::optional<std::size_t> pad_len = std::nullopt);

/// Decodes a reversed literal back to its value; padding zeros and a negative
/// sign on an all-zero literal are ignored. Throws ParseError on non-digit
/// characters.
DigitString from_reversed_literal(const ReversedLiteral& literal);

/// Parses the standalone text form: digits least-significant-first with an
/// optional trailing '-'.
ReversedLiteral parse_reversed_literal(std::string_view text);

}  // namespace revorder
