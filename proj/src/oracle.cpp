#include "atomcheck/oracle.hpp"

namespace atomcheck {

namespace {

// Backtracking over per-sequence cursors. A sequence is eligible when all
// of its happens-before predecessor sequences are exhausted.
struct LinearizationWalk {
  const Harness& h;
  const std::function<bool(const std::vector<int>&)>& fn;
  std::vector<int> cursor;      // next position per sequence
  std::vector<int> slot_base;   // first outcome slot per sequence
  std::vector<std::vector<int>> preds;  // hb predecessors per sequence
  std::vector<int> order;
  int total = 0;
  bool stopped = false;

  LinearizationWalk(const Harness& harness,
                    const std::function<bool(const std::vector<int>&)>& callback)
      : h(harness), fn(callback) {
    int n = h.num_sequences();
    cursor.assign(n, 0);
    slot_base.resize(n);
    preds.resize(n);
    int next = 0;
    for (int s = 0; s < n; ++s) {
      slot_base[s] = next;
      next += static_cast<int>(h.sequences[s].size());
    }
    total = next;
    OrderPairs closure = transitive_closure(n, h.hb);
    for (const auto& [i, j] : closure) preds[j].push_back(i);
    order.reserve(total);
  }

  bool exhausted(int s) const {
    return cursor[s] >= static_cast<int>(h.sequences[s].size());
  }

  bool eligible(int s) const {
    if (exhausted(s)) return false;
    for (int p : preds[s]) {
      if (!exhausted(p)) return false;
    }
    return true;
  }

  void walk() {
    if (stopped) return;
    if (static_cast<int>(order.size()) == total) {
      if (!fn(order)) stopped = true;
      return;
    }
    for (int s = 0; s < h.num_sequences() && !stopped; ++s) {
      if (!eligible(s)) continue;
      order.push_back(slot_base[s] + cursor[s]);
      ++cursor[s];
      walk();
      --cursor[s];
      order.pop_back();
    }
  }
};

}  // namespace

void for_each_linearization(const Harness& h,
                            const std::function<bool(const std::vector<int>&)>& fn) {
  LinearizationWalk walk(h, fn);
  walk.walk();
}

std::vector<std::vector<int>> linearizations(const Harness& h) {
  std::vector<std::vector<int>> out;
  for_each_linearization(h, [&](const std::vector<int>& order) {
    out.push_back(order);
    return true;
  });
  return out;
}

uint64_t count_linearizations(const Harness& h) {
  uint64_t n = 0;
  for_each_linearization(h, [&](const std::vector<int>&) {
    ++n;
    return true;
  });
  return n;
}

namespace {

struct BoundInvocation {
  int method;
  const std::vector<Value>* args;
};

std::vector<BoundInvocation> bind_invocations(const Harness& h,
                                              const SequentialSpec& spec) {
  validate_harness(h, spec);
  std::vector<BoundInvocation> bound;
  for (const auto& item : indexed_invocations(h)) {
    bound.push_back(
        {spec.method_index(item.invocation->method), &item.invocation->args});
  }
  return bound;
}

}  // namespace

Outcome replay_linearization(const Harness& h, const std::vector<int>& order,
                             const SequentialSpec& spec) {
  auto bound = bind_invocations(h, spec);
  AdtState state = spec.new_state();
  Outcome o;
  o.values.resize(bound.size());
  for (int slot : order) {
    o.values[slot] = spec.apply_indexed(state, bound[slot].method, *bound[slot].args);
  }
  return o;
}

AtomicOutcomeSet atomic_outcomes(const Harness& h, const SequentialSpec& spec) {
  auto bound = bind_invocations(h, spec);
  AtomicOutcomeSet set;
  set.harness_text = format_harness(h);
  set.width = h.num_invocations();
  for_each_linearization(h, [&](const std::vector<int>& order) {
    AdtState state = spec.new_state();
    Outcome o;
    o.values.resize(bound.size());
    for (int slot : order) {
      o.values[slot] =
          spec.apply_indexed(state, bound[slot].method, *bound[slot].args);
    }
    set.outcomes.insert(std::move(o));
    return true;
  });
  return set;
}

bool is_atomic_outcome(const Outcome& o, const AtomicOutcomeSet& set) {
  return set.contains(o);
}

}  // namespace atomcheck
