#pragma once

#include <string>
#include <vector>

#include "atomcheck/value.hpp"

namespace atomcheck {

/// A fixed-length vector of return values, one slot per invocation in
/// listing order. The unit of atomicity checking.
struct Outcome {
  std::vector<Value> values;

  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.values == b.values;
  }

  /// Renders as `null, (), null, true`.
  std::string to_string() const;
};

struct OutcomeHash {
  size_t operator()(const Outcome& o) const {
    size_t h = 0x811c9dc5;
    for (const Value& v : o.values) {
      h ^= v.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Parses `null, (), null, true` or `(0,null,null)`; the inverse of
/// Outcome::to_string modulo whitespace.
Outcome parse_outcome(const std::string& text);

}  // namespace atomcheck
