#include "atomcheck/value.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace atomcheck {

Value Value::list(List elems) {
  Value x;
  x.kind_ = ValueKind::List;
  x.list_ = std::make_shared<const List>(std::move(elems));
  return x;
}

Value Value::map(Map pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i - 1].first == pairs[i].first) {
      throw std::invalid_argument("map value has duplicate keys");
    }
  }
  Value x;
  x.kind_ = ValueKind::Map;
  x.map_ = std::make_shared<const Map>(std::move(pairs));
  return x;
}

bool Value::as_bool() const {
  if (kind_ != ValueKind::Bool) throw std::logic_error("value is not a bool");
  return scalar_ != 0;
}

int64_t Value::as_int() const {
  if (kind_ != ValueKind::Int) throw std::logic_error("value is not an int");
  return scalar_;
}

const Value::List& Value::as_list() const {
  if (kind_ != ValueKind::List) throw std::logic_error("value is not a list");
  return *list_;
}

const Value::Map& Value::as_map() const {
  if (kind_ != ValueKind::Map) throw std::logic_error("value is not a map");
  return *map_;
}

int Value::compare(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) {
    return static_cast<int>(a.kind_) < static_cast<int>(b.kind_) ? -1 : 1;
  }
  switch (a.kind_) {
    case ValueKind::Unit:
    case ValueKind::Null:
    case ValueKind::Exception:
      return 0;
    case ValueKind::Bool:
    case ValueKind::Int:
      if (a.scalar_ != b.scalar_) return a.scalar_ < b.scalar_ ? -1 : 1;
      return 0;
    case ValueKind::List: {
      const List& x = *a.list_;
      const List& y = *b.list_;
      size_t n = std::min(x.size(), y.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(x[i], y[i]);
        if (c != 0) return c;
      }
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      return 0;
    }
    case ValueKind::Map: {
      const Map& x = *a.map_;
      const Map& y = *b.map_;
      size_t n = std::min(x.size(), y.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(x[i].first, y[i].first);
        if (c != 0) return c;
        c = compare(x[i].second, y[i].second);
        if (c != 0) return c;
      }
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

size_t Value::hash() const {
  auto mix = [](size_t h, size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  };
  size_t h = static_cast<size_t>(kind_) * 0x100000001b3ULL;
  switch (kind_) {
    case ValueKind::Unit:
    case ValueKind::Null:
    case ValueKind::Exception:
      return h;
    case ValueKind::Bool:
    case ValueKind::Int:
      return mix(h, static_cast<size_t>(scalar_));
    case ValueKind::List:
      for (const Value& v : *list_) h = mix(h, v.hash());
      return h;
    case ValueKind::Map:
      for (const auto& [k, v] : *map_) h = mix(mix(h, k.hash()), v.hash());
      return h;
  }
  return h;
}

namespace {

void render(const Value& v, std::ostringstream& out, bool argument_style) {
  switch (v.kind()) {
    case ValueKind::Unit:
      out << "()";
      return;
    case ValueKind::Null:
      out << "null";
      return;
    case ValueKind::Bool:
      out << (v.as_bool() ? "true" : "false");
      return;
    case ValueKind::Int:
      out << v.as_int();
      return;
    case ValueKind::Exception:
      out << "E";
      return;
    case ValueKind::List: {
      out << (argument_style ? '{' : '[');
      bool first = true;
      for (const Value& e : v.as_list()) {
        if (!first) out << ',';
        first = false;
        render(e, out, argument_style);
      }
      out << (argument_style ? '}' : ']');
      return;
    }
    case ValueKind::Map: {
      out << (argument_style ? '{' : '[');
      bool first = true;
      for (const auto& [k, val] : v.as_map()) {
        if (!first) out << ',';
        first = false;
        render(k, out, argument_style);
        out << '=';
        render(val, out, argument_style);
      }
      out << (argument_style ? '}' : ']');
      return;
    }
  }
}

}  // namespace

std::string Value::to_string() const {
  std::ostringstream out;
  render(*this, out, false);
  return out.str();
}

std::string Value::to_argument_string() const {
  std::ostringstream out;
  render(*this, out, true);
  return out.str();
}

}  // namespace atomcheck
