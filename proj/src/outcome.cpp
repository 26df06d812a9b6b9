#include "atomcheck/outcome.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "atomcheck/harness.hpp"

namespace atomcheck {

std::string Outcome::to_string() const {
  std::ostringstream out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ", ";
    out << values[i].to_string();
  }
  return out.str();
}

namespace {

class OutcomeParser {
 public:
  explicit OutcomeParser(const std::string& text) : s_(text) {}

  Outcome parse() {
    Outcome o;
    skip_ws();
    bool wrapped = eat('(') && !at_value_end();
    if (wrapped && eat(')')) return o;  // "()" alone is a unit value, not a wrapper
    if (!wrapped && pos_ > 0) pos_ = 0;  // rewind: "(" belonged to a unit value
    o.values.push_back(parse_value());
    while (eat(',')) o.values.push_back(parse_value());
    skip_ws();
    eat(')');
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input after outcome");
    return o;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  bool at_value_end() const {
    size_t p = pos_;
    while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    return p < s_.size() && s_[p] == ')';
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat_word(const char* w) {
    skip_ws();
    size_t len = std::string(w).size();
    if (s_.compare(pos_, len, w) != 0) return false;
    char after = pos_ + len < s_.size() ? s_[pos_ + len] : '\0';
    if (std::isalnum(static_cast<unsigned char>(after))) return false;
    pos_ += len;
    return true;
  }

  int64_t parse_int() {
    skip_ws();
    size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '-')) {
      fail("expected an integer");
    }
    return std::stoll(s_.substr(start, pos_ - start));
  }

  Value parse_collection() {
    // [a,b] list or [k=v,...] map
    skip_ws();
    ++pos_;  // '['
    skip_ws();
    if (eat(']')) return Value::list({});
    int64_t first = parse_int();
    skip_ws();
    if (eat('=')) {
      Value::Map pairs;
      pairs.emplace_back(Value::integer(first), Value::integer(parse_int()));
      while (eat(',')) {
        int64_t k = parse_int();
        if (!eat('=')) fail("expected '=' in map entry");
        pairs.emplace_back(Value::integer(k), Value::integer(parse_int()));
      }
      if (!eat(']')) fail("expected ']' to close a map");
      return Value::map(std::move(pairs));
    }
    Value::List elems{Value::integer(first)};
    while (eat(',')) elems.push_back(Value::integer(parse_int()));
    if (!eat(']')) fail("expected ']' to close a list");
    return Value::list(std::move(elems));
  }

  Value parse_value() {
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      if (!eat(')')) fail("expected ')' after '(' in a unit value");
      return Value::unit();
    }
    if (peek() == '[') return parse_collection();
    if (eat_word("null")) return Value::null();
    if (eat_word("true")) return Value::boolean(true);
    if (eat_word("false")) return Value::boolean(false);
    if (eat_word("E")) return Value::exception();
    return Value::integer(parse_int());
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

Outcome parse_outcome(const std::string& text) { return OutcomeParser(text).parse(); }

}  // namespace atomcheck
