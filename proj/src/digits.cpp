#include "revorder/digits.hpp"

#include <algorithm>
#include <cstdlib>

namespace revorder {

void DigitString::canonicalize() {
  while (mags_.size() > 1 && mags_.back() == 0) mags_.pop_back();
  if (mags_.empty()) mags_.push_back(0);
  if (is_zero()) negative_ = false;
}

DigitString DigitString::from_decimal(std::string_view text) {
  if (text.empty()) throw ParseError("empty number", 0);
  bool neg = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw ParseError("number has no digits", i);
  DigitString out;
  out.mags_.clear();
  out.mags_.reserve(text.size() - i);
  for (std::size_t j = text.size(); j > i; --j) {
    char c = text[j - 1];
    if (c < '0' || c > '9') throw ParseError("non-digit character in number", j - 1);
    out.mags_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  out.negative_ = neg;
  out.canonicalize();
  return out;
}

DigitString DigitString::from_uint(std::uint64_t value) {
  DigitString out;
  out.mags_.clear();
  if (value == 0) {
    out.mags_.push_back(0);
    return out;
  }
  while (value > 0) {
    out.mags_.push_back(static_cast<std::uint8_t>(value % 10));
    value /= 10;
  }
  return out;
}

DigitString DigitString::from_int(std::int64_t value) {
  // Avoids overflow on INT64_MIN by negating in unsigned space.
  std::uint64_t mag = value < 0 ? ~static_cast<std::uint64_t>(value) + 1
                                : static_cast<std::uint64_t>(value);
  DigitString out = from_uint(mag);
  out.negative_ = value < 0;
  return out;
}

DigitString DigitString::from_digits(std::vector<std::uint8_t> mags, bool negative) {
  for (std::uint8_t d : mags) {
    if (d > 9) throw DomainError("digit out of range 0..9");
  }
  DigitString out;
  out.mags_ = std::move(mags);
  out.negative_ = negative;
  out.canonicalize();
  return out;
}

std::string DigitString::to_decimal() const {
  std::string s;
  s.reserve(mags_.size() + 1);
  if (negative_) s.push_back('-');
  for (std::size_t i = mags_.size(); i > 0; --i) {
    s.push_back(static_cast<char>('0' + mags_[i - 1]));
  }
  return s;
}

DigitString DigitString::abs() const {
  DigitString out = *this;
  out.negative_ = false;
  return out;
}

DigitString DigitString::negated() const {
  DigitString out = *this;
  if (!out.is_zero()) out.negative_ = !out.negative_;
  return out;
}

DigitString DigitString::shifted_up(std::size_t places) const {
  if (is_zero() || places == 0) return *this;
  DigitString out;
  out.mags_.assign(places, 0);
  out.mags_.insert(out.mags_.end(), mags_.begin(), mags_.end());
  out.negative_ = negative_;
  return out;
}

int DigitString::compare_magnitude(const DigitString& a, const DigitString& b) {
  if (a.mags_.size() != b.mags_.size()) {
    return a.mags_.size() < b.mags_.size() ? -1 : 1;
  }
  for (std::size_t i = a.mags_.size(); i > 0; --i) {
    if (a.mags_[i - 1] != b.mags_[i - 1]) {
      return a.mags_[i - 1] < b.mags_[i - 1] ? -1 : 1;
    }
  }
  return 0;
}

std::strong_ordering DigitString::operator<=>(const DigitString& other) const {
  if (negative_ != other.negative_) {
    return negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  int mag = compare_magnitude(*this, other);
  if (negative_) mag = -mag;
  if (mag < 0) return std::strong_ordering::less;
  if (mag > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::size_t CarryTrace::longest_run() const {
  std::size_t best = 0, run = 0;
  for (std::uint8_t v : values) {
    if (v != 0) {
      ++run;
      best = std::max(best, run);
    } else {
      run = 0;
    }
  }
  return best;
}

namespace {

// Magnitude-only column addition; carries are 0/1 per position, length
// max(len a, len b).
AddWithCarries add_magnitudes(const DigitString& a, const DigitString& b) {
  std::size_t n = std::max(a.digit_count(), b.digit_count());
  std::vector<std::uint8_t> digits;
  std::vector<std::uint8_t> carries(n, 0);
  digits.reserve(n + 1);
  std::uint8_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t col = static_cast<std::uint8_t>(a.digit_at(i) + b.digit_at(i) + carry);
    carry = col >= 10 ? 1 : 0;
    carries[i] = carry;
    digits.push_back(static_cast<std::uint8_t>(col % 10));
  }
  if (carry) digits.push_back(1);
  return {DigitString::from_digits(std::move(digits)), CarryTrace{std::move(carries)}};
}

// |big| - |small| with |big| >= |small|; borrows are 0/1, length len(big).
SubWithBorrows sub_magnitudes(const DigitString& big, const DigitString& small) {
  std::size_t n = big.digit_count();
  std::vector<std::uint8_t> digits(n, 0);
  std::vector<std::uint8_t> borrows(n, 0);
  std::uint8_t borrow = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int col = static_cast<int>(big.digit_at(i)) - static_cast<int>(small.digit_at(i)) - borrow;
    if (col < 0) {
      col += 10;
      borrow = 1;
    } else {
      borrow = 0;
    }
    borrows[i] = borrow;
    digits[i] = static_cast<std::uint8_t>(col);
  }
  return {DigitString::from_digits(std::move(digits)), BorrowTrace{std::move(borrows)}};
}

}  // namespace

AddWithCarries add_with_carries(const DigitString& a, const DigitString& b) {
  if (a.negative() == b.negative()) {
    AddWithCarries r = add_magnitudes(a, b);
    if (a.negative()) r.sum = r.sum.negated();
    return r;
  }
  // Mixed signs: |a| - |b| in schoolbook columns, sign from the larger side.
  int cmp = DigitString::compare_magnitude(a, b);
  const DigitString& big = cmp >= 0 ? a : b;
  const DigitString& small = cmp >= 0 ? b : a;
  SubWithBorrows r = sub_magnitudes(big, small);
  DigitString sum = big.negative() ? r.difference.negated() : r.difference;
  return {std::move(sum), std::move(r.borrows)};
}

SubWithBorrows sub_with_borrows(const DigitString& a, const DigitString& b) {
  if (a.negative() != b.negative()) {
    AddWithCarries r = add_magnitudes(a, b);
    DigitString diff = a.negative() ? r.sum.negated() : r.sum;
    return {std::move(diff), std::move(r.carries)};
  }
  int cmp = DigitString::compare_magnitude(a, b);
  const DigitString& big = cmp >= 0 ? a : b;
  const DigitString& small = cmp >= 0 ? b : a;
  SubWithBorrows r = sub_magnitudes(big, small);
  // a - b with matching signs: positive pair flips sign when |a| < |b|,
  // negative pair flips when |a| > |b|.
  bool neg = a.negative() ? cmp > 0 : cmp < 0;
  if (neg) r.difference = r.difference.negated();
  return r;
}

MulByDigit mul_1d(const DigitString& a, unsigned digit) {
  if (digit > 9) throw DomainError("mul_1d digit out of range 0..9");
  std::size_t n = a.digit_count();
  std::vector<std::uint8_t> digits;
  std::vector<std::uint8_t> carries(n, 0);
  digits.reserve(n + 1);
  std::uint8_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    unsigned col = a.digit_at(i) * digit + carry;
    carry = static_cast<std::uint8_t>(col / 10);
    carries[i] = carry;
    digits.push_back(static_cast<std::uint8_t>(col % 10));
  }
  if (carry) digits.push_back(carry);
  bool neg = a.negative() && digit != 0;
  return {DigitString::from_digits(std::move(digits), neg), CarryTrace{std::move(carries)}};
}

DigitString mul(const DigitString& a, const DigitString& b) {
  DigitString acc;
  for (std::size_t place = 0; place < b.digit_count(); ++place) {
    std::uint8_t d = b.digit_at(place);
    if (d == 0) continue;
    DigitString part = mul_1d(a.abs(), d).product.shifted_up(place);
    acc = add_with_carries(acc, part).sum;
  }
  if (a.negative() != b.negative()) acc = acc.negated();
  return acc;
}

ReversedLiteral to_reversed_literal(const DigitString& x, std::optional<std::size_t> pad_len) {
  std::size_t significant = x.digit_count();
  std::size_t width = pad_len.value_or(significant);
  if (width < significant) {
    throw DomainError("pad_len " + std::to_string(width) + " smaller than significant digit count " +
                      std::to_string(significant));
  }
  ReversedLiteral lit;
  lit.digits.reserve(width);
  for (std::size_t i = 0; i < significant; ++i) {
    lit.digits.push_back(static_cast<char>('0' + x.mags()[i]));
  }
  lit.digits.append(width - significant, '0');
  lit.negative = x.negative();
  return lit;
}

DigitString from_reversed_literal(const ReversedLiteral& literal) {
  if (literal.digits.empty()) throw ParseError("empty reversed literal", 0);
  std::vector<std::uint8_t> mags;
  mags.reserve(literal.digits.size());
  for (std::size_t i = 0; i < literal.digits.size(); ++i) {
    char c = literal.digits[i];
    if (c < '0' || c > '9') throw ParseError("non-digit character in reversed literal", i);
    mags.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return DigitString::from_digits(std::move(mags), literal.negative);
}

ReversedLiteral parse_reversed_literal(std::string_view text) {
  ReversedLiteral lit;
  if (!text.empty() && text.back() == '-') {
    lit.negative = true;
    text.remove_suffix(1);
  }
  if (text.empty()) throw ParseError("empty reversed literal", 0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw ParseError("non-digit character in reversed literal", i);
    }
  }
  lit.digits.assign(text);
  return lit;
}

}  // namespace revorder
