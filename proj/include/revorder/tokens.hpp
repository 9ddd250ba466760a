#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "revorder/traces.hpp"

namespace revorder {

/// Unicode codepoints in `text`, with every "r|" marker collapsed to one
/// token (the marker is a single token in the target vocabulary even though
/// it spells as two characters).
std::size_t token_count(std::string_view text);

struct TokenCost {
  std::size_t total = 0;  // tokens in the serialized trace
  std::size_t bare = 0;   // tokens in "a op b = result" with a forward result

  std::size_t extra() const { return total > bare ? total - bare : 0; }

  bool operator==(const TokenCost&) const = default;
};

/// Token budget of a trace against the bare forward-order equation it
/// answers; division's bare result is "q" or "qRr".
TokenCost token_cost(const Trace& trace, Form form);

/// Rewrites a +/-/× equation chain so every intermediate result appears
/// least-significant-digit-first between delimiter markers, folding strictly
/// left to right (no operator precedence), and closes with the forward
/// total: "1+2+4" → "1+2+4=@@3@@+4=@@7@@=7". A negative intermediate keeps
/// its sign outside the markers. Division chains are rejected with
/// ParseError.
std::string rewrite_equation_chain(std::string_view text,
                                   std::string_view delimiter = "@@");

}  // namespace revorder
