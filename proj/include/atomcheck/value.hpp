#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace atomcheck {

enum class ValueKind : uint8_t { Unit, Null, Bool, Int, List, Map, Exception };

/// An argument or return value. Scalars live inline; lists and maps sit
/// behind shared immutable payloads so copying a Value stays cheap inside
/// the stress loop.
///
/// Two notations are supported when printing. Outcome notation renders
/// collections with brackets (`[0,1]`, `[0=1,1=0]`); argument notation
/// renders them with braces (`{0,1}`, `{0=1,1=0}`), which is how they
/// appear inside harness text.
class Value {
 public:
  using List = std::vector<Value>;
  using Map = std::vector<std::pair<Value, Value>>;  // kept sorted by key

  Value() : kind_(ValueKind::Unit) {}

  static Value unit() { return Value(); }
  static Value null() { return scalar(ValueKind::Null, 0); }
  static Value boolean(bool b) { return scalar(ValueKind::Bool, b ? 1 : 0); }
  static Value integer(int64_t i) { return scalar(ValueKind::Int, i); }
  static Value exception() { return scalar(ValueKind::Exception, 0); }
  static Value list(List elems);
  // Sorts by key; throws std::invalid_argument on duplicate keys.
  static Value map(Map pairs);

  ValueKind kind() const { return kind_; }
  bool is_unit() const { return kind_ == ValueKind::Unit; }
  bool is_null() const { return kind_ == ValueKind::Null; }
  bool is_int() const { return kind_ == ValueKind::Int; }
  bool is_exception() const { return kind_ == ValueKind::Exception; }

  bool as_bool() const;
  int64_t as_int() const;
  const List& as_list() const;
  const Map& as_map() const;

  // All exceptions compare equal: outcomes collapse them to one symbol.
  friend bool operator==(const Value& a, const Value& b) {
    return compare(a, b) == 0;
  }
  friend bool operator!=(const Value& a, const Value& b) {
    return compare(a, b) != 0;
  }
  friend bool operator<(const Value& a, const Value& b) {
    return compare(a, b) < 0;
  }

  /// Total order: kind rank first, then payload. Used for canonical
  /// sorting of value sets and map keys.
  static int compare(const Value& a, const Value& b);

  size_t hash() const;

  std::string to_string() const;           // outcome notation
  std::string to_argument_string() const;  // argument notation

 private:
  static Value scalar(ValueKind k, int64_t v) {
    Value x;
    x.kind_ = k;
    x.scalar_ = v;
    return x;
  }

  ValueKind kind_;
  int64_t scalar_ = 0;
  std::shared_ptr<const List> list_;
  std::shared_ptr<const Map> map_;
};

struct ValueHash {
  size_t operator()(const Value& v) const { return v.hash(); }
};

}  // namespace atomcheck
