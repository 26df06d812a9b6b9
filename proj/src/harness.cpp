#include "atomcheck/harness.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace atomcheck {

std::string Invocation::to_string() const {
  std::ostringstream out;
  out << method << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out << ',';
    out << args[i].to_argument_string();
  }
  out << ')';
  return out.str();
}

int Harness::num_invocations() const {
  int n = 0;
  for (const auto& seq : sequences) n += static_cast<int>(seq.size());
  return n;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Harness parse() {
    Harness h;
    skip_ws();
    h.sequences.push_back(parse_sequence());
    skip_ws();
    while (eat(',')) {
      skip_ws();
      if (peek() == '{') {
        h.hb = parse_hb_block();
        break;
      }
      h.sequences.push_back(parse_sequence());
      skip_ws();
    }
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input after harness");
    return h;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

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

  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
  }

  int64_t parse_int() {
    skip_ws();
    if (peek() == '-') fail("negative values are not allowed");
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }

  std::string parse_identifier() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a method name");
    return s_.substr(start, pos_ - start);
  }

  bool lookahead_word(const char* w) {
    skip_ws();
    size_t len = std::string(w).size();
    if (s_.compare(pos_, len, w) != 0) return false;
    char after = pos_ + len < s_.size() ? s_[pos_ + len] : '\0';
    if (std::isalnum(static_cast<unsigned char>(after)) || after == '_') return false;
    pos_ += len;
    return true;
  }

  Value parse_collection() {
    expect('{', "to open a collection argument");
    skip_ws();
    if (eat('}')) return Value::list({});
    int64_t first = parse_int();
    skip_ws();
    if (eat('=')) {
      Value::Map pairs;
      pairs.emplace_back(Value::integer(first), Value::integer(parse_int()));
      while (eat(',')) {
        int64_t k = parse_int();
        expect('=', "between map key and value");
        pairs.emplace_back(Value::integer(k), Value::integer(parse_int()));
      }
      expect('}', "to close a map argument");
      try {
        return Value::map(std::move(pairs));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    Value::List elems{Value::integer(first)};
    while (eat(',')) elems.push_back(Value::integer(parse_int()));
    expect('}', "to close a collection argument");
    return Value::list(std::move(elems));
  }

  Value parse_argument() {
    skip_ws();
    if (peek() == '{') return parse_collection();
    if (lookahead_word("true")) return Value::boolean(true);
    if (lookahead_word("false")) return Value::boolean(false);
    if (lookahead_word("null")) return Value::null();
    return Value::integer(parse_int());
  }

  Invocation parse_invocation() {
    Invocation inv;
    inv.method = parse_identifier();
    expect('(', "after method name");
    skip_ws();
    if (!eat(')')) {
      inv.args.push_back(parse_argument());
      while (eat(',')) inv.args.push_back(parse_argument());
      expect(')', "to close the argument list");
    }
    return inv;
  }

  std::vector<Invocation> parse_sequence() {
    expect('[', "to open an invocation sequence");
    std::vector<Invocation> seq;
    seq.push_back(parse_invocation());
    while (eat(';')) seq.push_back(parse_invocation());
    expect(']', "to close the invocation sequence");
    return seq;
  }

  OrderPairs parse_hb_block() {
    expect('{', "to open the happens-before block");
    OrderPairs pairs;
    skip_ws();
    if (eat('}')) return pairs;
    do {
      int i = static_cast<int>(parse_int());
      expect('<', "in a happens-before constraint");
      int j = static_cast<int>(parse_int());
      pairs.emplace(i, j);
    } while (eat(','));
    expect('}', "to close the happens-before block");
    return pairs;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

void check_well_formed(const Harness& h) {
  if (h.sequences.empty()) throw HarnessError("harness has no sequences");
  for (const auto& seq : h.sequences) {
    if (seq.empty()) throw HarnessError("harness has an empty sequence");
  }
  int n = h.num_sequences();
  for (const auto& [i, j] : h.hb) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw HarnessError("happens-before index out of range");
    }
    if (i == j) throw HarnessError("happens-before is not irreflexive");
  }
  if (!is_strict_partial_order(n, h.hb)) {
    throw HarnessError("happens-before constraints form a cycle");
  }
}

Harness parse_harness(const std::string& text) {
  Harness h = Parser(text).parse();
  check_well_formed(h);
  return h;
}

std::string format_harness(const Harness& h) {
  std::ostringstream out;
  for (size_t s = 0; s < h.sequences.size(); ++s) {
    if (s > 0) out << ", ";
    out << '[';
    const auto& seq = h.sequences[s];
    for (size_t i = 0; i < seq.size(); ++i) {
      if (i > 0) out << "; ";
      out << seq[i].to_string();
    }
    out << ']';
  }
  if (!h.hb.empty()) {
    out << ", {";
    bool first = true;
    for (const auto& [i, j] : h.hb) {
      if (!first) out << ", ";
      first = false;
      out << i << " < " << j;
    }
    out << '}';
  }
  return out.str();
}

namespace {

void collect_ints(const Value& v, std::set<Value>& into) {
  switch (v.kind()) {
    case ValueKind::Int:
      into.insert(v);
      return;
    case ValueKind::List:
      for (const Value& e : v.as_list()) collect_ints(e, into);
      return;
    case ValueKind::Map:
      for (const auto& [k, val] : v.as_map()) {
        collect_ints(k, into);
        collect_ints(val, into);
      }
      return;
    default:
      return;
  }
}

}  // namespace

HarnessStats stats(const Harness& h) {
  HarnessStats st;
  st.num_sequences = h.num_sequences();
  for (const auto& seq : h.sequences) {
    st.num_invocations += static_cast<int>(seq.size());
    for (const Invocation& inv : seq) {
      st.methods.insert(inv.method);
      st.per_method[inv.method].push_back(inv);
      for (const Value& a : inv.args) collect_ints(a, st.values);
    }
  }
  return st;
}

std::vector<IndexedInvocation> indexed_invocations(const Harness& h) {
  std::vector<IndexedInvocation> out;
  int index = 0;
  for (int s = 0; s < h.num_sequences(); ++s) {
    for (int p = 0; p < static_cast<int>(h.sequences[s].size()); ++p) {
      out.push_back({index++, s, p, &h.sequences[s][p]});
    }
  }
  return out;
}

OrderPairs induced_invocation_order(const Harness& h) {
  std::vector<std::pair<int, int>> slot_range(h.num_sequences());  // [begin, end)
  int next = 0;
  for (int s = 0; s < h.num_sequences(); ++s) {
    slot_range[s] = {next, next + static_cast<int>(h.sequences[s].size())};
    next = slot_range[s].second;
  }
  OrderPairs order;
  for (int s = 0; s < h.num_sequences(); ++s) {
    for (int a = slot_range[s].first; a < slot_range[s].second; ++a) {
      for (int b = a + 1; b < slot_range[s].second; ++b) order.emplace(a, b);
    }
  }
  OrderPairs hb_closure = transitive_closure(h.num_sequences(), h.hb);
  for (const auto& [i, j] : hb_closure) {
    for (int a = slot_range[i].first; a < slot_range[i].second; ++a) {
      for (int b = slot_range[j].first; b < slot_range[j].second; ++b) {
        order.emplace(a, b);
      }
    }
  }
  return order;
}

namespace {

bool sequence_is_prefix(const std::vector<Invocation>& a,
                        const std::vector<Invocation>& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

bool extend_prefix_map(const Harness& h1, const Harness& h2,
                       const OrderPairs& closure2, std::vector<int>& f,
                       std::vector<bool>& used) {
  int s1 = h1.num_sequences();
  int s2 = h2.num_sequences();
  int i = static_cast<int>(f.size());
  if (i == s1) {
    // Every mapped sequence must happen before every unmapped one.
    for (int a : f) {
      for (int b = 0; b < s2; ++b) {
        if (!used[b] && !closure2.count({a, b})) return false;
      }
    }
    return true;
  }
  for (int cand = 0; cand < s2; ++cand) {
    if (used[cand]) continue;
    if (!sequence_is_prefix(h1.sequences[i], h2.sequences[cand])) continue;
    used[cand] = true;
    f.push_back(cand);
    if (extend_prefix_map(h1, h2, closure2, f, used)) return true;
    f.pop_back();
    used[cand] = false;
  }
  return false;
}

}  // namespace

bool is_prefix(const Harness& h1, const Harness& h2) {
  if (h1.num_sequences() > h2.num_sequences()) return false;
  OrderPairs closure2 = transitive_closure(h2.num_sequences(), h2.hb);
  std::vector<int> f;
  std::vector<bool> used(h2.num_sequences(), false);
  return extend_prefix_map(h1, h2, closure2, f, used);
}

Harness canonicalize(const Harness& h) {
  int n = h.num_sequences();
  std::vector<std::string> seq_text(n);
  for (int s = 0; s < n; ++s) {
    Harness one;
    one.sequences.push_back(h.sequences[s]);
    seq_text[s] = format_harness(one);
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  using Key = std::pair<std::vector<std::string>, std::vector<std::pair<int, int>>>;
  Key best;
  std::vector<int> best_perm;
  bool have_best = false;

  do {
    std::vector<int> inv(n);  // old index -> new index
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    OrderPairs hb = relabel(h.hb, inv);
    Key key;
    key.first.reserve(n);
    for (int i = 0; i < n; ++i) key.first.push_back(seq_text[perm[i]]);
    key.second.assign(hb.begin(), hb.end());
    if (!have_best || key < best) {
      best = std::move(key);
      best_perm = perm;
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Harness out;
  out.sequences.reserve(n);
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) {
    out.sequences.push_back(h.sequences[best_perm[i]]);
    inv[best_perm[i]] = i;
  }
  out.hb = relabel(h.hb, inv);
  return out;
}

Harness singletonize(const History& hist) {
  Harness out;
  for (const auto& item : indexed_invocations(hist.harness)) {
    out.sequences.push_back({*item.invocation});
  }
  out.hb = hist.hb_invocations;
  check_well_formed(out);
  return out;
}

}  // namespace atomcheck
