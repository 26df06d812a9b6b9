#include "atomcheck/lin_checker.hpp"

#include <sstream>
#include <unordered_set>

namespace atomcheck {

History induced_history(const Harness& h, Outcome o) {
  History hist;
  hist.harness = h;
  hist.outcome = std::move(o);
  hist.hb_invocations = induced_invocation_order(h);
  return hist;
}

void check_history(const History& hist) {
  check_well_formed(hist.harness);
  int n = hist.harness.num_invocations();
  if (static_cast<int>(hist.outcome.values.size()) != n) {
    throw HarnessError("outcome length does not match the invocation count");
  }
  for (const auto& [a, b] : hist.hb_invocations) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw HarnessError("history happens-before index out of range");
    }
  }
  if (!is_strict_partial_order(n, hist.hb_invocations)) {
    throw HarnessError("history happens-before forms a cycle");
  }
  OrderPairs closure = transitive_closure(n, hist.hb_invocations);
  for (const auto& pair : induced_invocation_order(hist.harness)) {
    if (!closure.count(pair)) {
      throw HarnessError("history happens-before is weaker than the harness order");
    }
  }
}

namespace {

std::string encode_state(const AdtState& s) {
  std::ostringstream out;
  out << 'm';
  for (const auto& [k, v] : s.map) out << k << ':' << v << ',';
  out << 'q';
  for (int64_t x : s.items) out << x << ',';
  out << 's';
  for (int64_t x : s.set) out << x << ',';
  return out.str();
}

struct Search {
  const SequentialSpec& spec;
  const std::vector<IndexedInvocation>& invocations;
  const Outcome& outcome;
  std::vector<uint32_t> pred_mask;  // per invocation, bitmask of predecessors
  std::unordered_set<std::string> dead;  // (mask, state) pairs proven futile

  bool run(uint32_t mask, const AdtState& state) {
    int n = static_cast<int>(invocations.size());
    if (mask == (1u << n) - 1) return true;
    std::string key = std::to_string(mask) + '|' + encode_state(state);
    if (dead.count(key)) return false;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) continue;
      if ((pred_mask[i] & mask) != pred_mask[i]) continue;
      AdtState next = state;
      Value ret = spec.apply(next, *invocations[i].invocation);
      if (ret != outcome.values[i]) continue;  // prune: wrong return value
      if (run(mask | (1u << i), next)) return true;
    }
    dead.insert(std::move(key));
    return false;
  }
};

}  // namespace

bool is_linearizable(const History& hist, const SequentialSpec& spec) {
  check_history(hist);
  int n = hist.harness.num_invocations();
  if (n > kMaxCheckedInvocations) {
    throw HarnessError("history too large for exhaustive linearizability search");
  }
  auto indexed = indexed_invocations(hist.harness);
  OrderPairs closure = transitive_closure(n, hist.hb_invocations);
  Search search{spec, indexed, hist.outcome, std::vector<uint32_t>(n, 0), {}};
  for (const auto& [a, b] : closure) search.pred_mask[b] |= 1u << a;
  return search.run(0, spec.new_state());
}

bool harness_linearizable_outcome(const Harness& h, const Outcome& o,
                                  const SequentialSpec& spec) {
  return is_linearizable(induced_history(h, o), spec);
}

}  // namespace atomcheck
