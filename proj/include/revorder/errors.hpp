#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace revorder {

/// Malformed textual input (equations, traces, literals). Carries the byte
/// offset of the first offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Violated operation precondition: division by zero, divisor larger than
/// dividend, pad length smaller than the significant digit count, and so on.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unsatisfiable dataset synthesis plan.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem trouble: unopenable paths, failed writes.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace revorder
