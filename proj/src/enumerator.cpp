#include "atomcheck/enumerator.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <unordered_set>

namespace atomcheck {

std::string EnumParams::to_string() const {
  return "(" + std::to_string(invocations) + "," + std::to_string(values) + "," +
         std::to_string(sequences) + ")";
}

ParamSchedule::ParamSchedule(EnumParams caps) : caps_(caps) {
  if (caps.invocations < 1 || caps.values < 1 || caps.sequences < 1) {
    throw SpecError("schedule caps must all be at least 1");
  }
}

bool ParamSchedule::exhausted() const {
  int top = std::max({caps_.invocations, caps_.values, caps_.sequences});
  return step_ >= top;
}

EnumParams ParamSchedule::next() {
  if (exhausted()) throw SpecError("parameter schedule exhausted");
  ++step_;
  EnumParams p;
  p.invocations = std::min(step_, caps_.invocations);
  p.values = std::min(step_, caps_.values);
  p.sequences = std::min(step_, caps_.sequences);
  p.sequences = std::min(p.sequences, p.invocations);  // every sequence nonempty
  return p;
}

std::vector<OrderPairs> happens_before_choices(int sequences, bool full) {
  std::vector<OrderPairs> out;
  if (sequences == 1) {
    out.push_back({});
    return out;
  }
  if (sequences <= 3 || full) {
    // Enumerate transitively closed irreflexive relations; emit each
    // poset once, in reduced form.
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < sequences; ++i) {
      for (int j = 0; j < sequences; ++j) {
        if (i != j) slots.emplace_back(i, j);
      }
    }
    int bits = static_cast<int>(slots.size());
    for (uint64_t mask = 0; mask < (1ull << bits); ++mask) {
      OrderPairs rel;
      for (int b = 0; b < bits; ++b) {
        if (mask & (1ull << b)) rel.insert(slots[b]);
      }
      if (!is_strict_partial_order(sequences, rel)) continue;
      if (transitive_closure(sequences, rel) != rel) continue;  // not closed
      out.push_back(transitive_reduction(sequences, rel));
    }
    return out;
  }
  // Two-phase shapes: optionally one sequence ordered before all others
  // and optionally one ordered after all others.
  out.push_back({});
  for (int initial = 0; initial < sequences; ++initial) {
    OrderPairs rel;
    for (int j = 0; j < sequences; ++j) {
      if (j != initial) rel.emplace(initial, j);
    }
    out.push_back(rel);
  }
  for (int fin = 0; fin < sequences; ++fin) {
    OrderPairs rel;
    for (int j = 0; j < sequences; ++j) {
      if (j != fin) rel.emplace(j, fin);
    }
    out.push_back(rel);
  }
  for (int initial = 0; initial < sequences; ++initial) {
    for (int fin = 0; fin < sequences; ++fin) {
      if (initial == fin) continue;
      OrderPairs rel;
      for (int j = 0; j < sequences; ++j) {
        if (j != initial) rel.emplace(initial, j);
        if (j != fin && j != initial) rel.emplace(j, fin);
      }
      out.push_back(transitive_reduction(sequences, rel));
    }
  }
  return out;
}

namespace {

void product(const std::vector<std::vector<Value>>& per_arg, size_t arg,
             std::vector<Value>& current, const MethodSpec& m,
             std::vector<Invocation>& out) {
  if (arg == per_arg.size()) {
    out.push_back({m.name, current});
    return;
  }
  for (const Value& v : per_arg[arg]) {
    current.push_back(v);
    product(per_arg, arg + 1, current, m, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Invocation> method_instantiations(const MethodSpec& m, int values) {
  std::vector<std::vector<Value>> per_arg;
  for (ArgKind kind : m.args) {
    std::vector<Value> choices;
    switch (kind) {
      case ArgKind::Key:
      case ArgKind::Val:
      case ArgKind::Scalar:
        for (int v = 0; v < values; ++v) choices.push_back(Value::integer(v));
        break;
      case ArgKind::Collection:
        // Size-2 multisets; repeats allowed.
        for (int a = 0; a < values; ++a) {
          for (int b = a; b < values; ++b) {
            choices.push_back(Value::list({Value::integer(a), Value::integer(b)}));
          }
        }
        break;
      case ArgKind::Map:
        // Two distinct keys, any values.
        for (int k1 = 0; k1 < values; ++k1) {
          for (int k2 = k1 + 1; k2 < values; ++k2) {
            for (int v1 = 0; v1 < values; ++v1) {
              for (int v2 = 0; v2 < values; ++v2) {
                choices.push_back(Value::map({{Value::integer(k1), Value::integer(v1)},
                                              {Value::integer(k2), Value::integer(v2)}}));
              }
            }
          }
        }
        break;
    }
    if (choices.empty()) return {};
    per_arg.push_back(std::move(choices));
  }
  std::vector<Invocation> out;
  std::vector<Value> current;
  product(per_arg, 0, current, m, out);
  return out;
}

bool uses_only_read_only(const Harness& h, const SequentialSpec& spec) {
  for (const auto& seq : h.sequences) {
    for (const Invocation& inv : seq) {
      if (spec.at(inv.method).mutability == Mutability::Update) return false;
    }
  }
  return true;
}

bool read_only_target_fully_serialized(const Harness& h, const std::string& method,
                                       const SequentialSpec& spec) {
  if (spec.at(method).mutability != Mutability::ReadOnly) return false;
  int target_seq = -1;
  for (int s = 0; s < h.num_sequences() && target_seq < 0; ++s) {
    for (const Invocation& inv : h.sequences[s]) {
      if (inv.method == method) {
        target_seq = s;
        break;
      }
    }
  }
  if (target_seq < 0) return false;
  OrderPairs closure = transitive_closure(h.num_sequences(), h.hb);
  for (int s = 0; s < h.num_sequences(); ++s) {
    if (s == target_seq) continue;
    if (closure.count({s, target_seq}) || closure.count({target_seq, s})) continue;
    for (const Invocation& inv : h.sequences[s]) {
      if (spec.at(inv.method).mutability == Mutability::Update) {
        return false;  // an update runs in parallel with the target
      }
    }
  }
  return true;
}

namespace {

uint32_t argument_value_mask(const Invocation& inv) {
  Harness h;
  h.sequences.push_back({inv});
  uint32_t mask = 0;
  for (const Value& v : stats(h).values) {
    mask |= 1u << static_cast<uint32_t>(v.as_int());
  }
  return mask;
}

struct PoolEntry {
  Invocation invocation;
  int method_slot;      // index into the allowed-method list
  uint32_t value_mask;  // integers used by the arguments
  bool is_target;
};

struct Builder {
  Builder(const SequentialSpec& s, const EnumOptions& o, EnumParams p,
          std::string method)
      : spec(s), options(o), params(p), target(std::move(method)) {}

  const SequentialSpec& spec;
  const EnumOptions& options;
  EnumParams params;
  std::string target;

  std::vector<PoolEntry> pool;
  int num_methods = 0;
  uint32_t full_value_mask = 0;
  std::vector<OrderPairs> hb_choices;
  const std::function<bool(const Harness&)>* sink = nullptr;

  std::unordered_set<std::string> seen;
  std::vector<int> lengths;
  std::vector<const PoolEntry*> fill;
  bool stopped = false;

  void emit() {
    Harness h;
    h.sequences.resize(lengths.size());
    size_t pos = 0;
    for (size_t s = 0; s < lengths.size(); ++s) {
      h.sequences[s].reserve(lengths[s]);
      for (int i = 0; i < lengths[s]; ++i) {
        h.sequences[s].push_back(fill[pos++]->invocation);
      }
    }
    for (const OrderPairs& hb : hb_choices) {
      h.hb = hb;
      Harness candidate = options.symmetry_reduction ? canonicalize(h) : h;
      if (options.symmetry_reduction &&
          !seen.insert(format_harness(candidate)).second) {
        continue;
      }
      if (options.filter_all_read_only && uses_only_read_only(candidate, spec)) {
        continue;
      }
      if (options.filter_serialized_read_only &&
          read_only_target_fully_serialized(candidate, target, spec)) {
        continue;
      }
      if (!(*sink)(candidate)) {
        stopped = true;
        return;
      }
    }
  }

  void fill_slots(size_t pos, int target_count, uint32_t method_mask,
                  uint32_t value_mask) {
    if (stopped) return;
    if (pos == fill.size()) {
      if (target_count != 1) return;
      if (!options.allow_method_subset &&
          method_mask != (1u << num_methods) - 1) {
        return;
      }
      if (!options.allow_value_subset && value_mask != full_value_mask) return;
      emit();
      return;
    }
    int remaining = static_cast<int>(fill.size() - pos);
    if (!options.allow_method_subset) {
      uint32_t all = (1u << num_methods) - 1;
      int missing = std::popcount(~method_mask & all);
      if (missing > remaining) return;
    } else if (target_count == 0) {
      // Only the target is mandatory; it still needs a slot.
      if (remaining < 1) return;
    }
    for (const PoolEntry& e : pool) {
      if (e.is_target && target_count == 1) continue;
      fill[pos] = &e;
      fill_slots(pos + 1, target_count + (e.is_target ? 1 : 0),
                 method_mask | (1u << e.method_slot), value_mask | e.value_mask);
      if (stopped) return;
    }
  }

  void compositions(int remaining, int parts, std::vector<int>& comp) {
    if (stopped) return;
    if (parts == 1) {
      comp.push_back(remaining);
      lengths = comp;
      fill.assign(params.invocations, nullptr);
      fill_slots(0, 0, 0, 0);
      comp.pop_back();
      return;
    }
    for (int first = 1; first + (parts - 1) <= remaining; ++first) {
      comp.push_back(first);
      compositions(remaining - first, parts - 1, comp);
      comp.pop_back();
      if (stopped) return;
    }
  }

  void run() {
    std::vector<int> comp;
    compositions(params.invocations, params.sequences, comp);
  }
};

}  // namespace

void for_each_constructed_harness(const std::vector<std::string>& core,
                                  const std::string& method, EnumParams params,
                                  const SequentialSpec& spec,
                                  const EnumOptions& options,
                                  const std::function<bool(const Harness&)>& fn) {
  if (params.values > 30) throw SpecError("value bound too large");
  spec.at(method);
  std::vector<std::string> allowed;
  for (const std::string& c : core) {
    spec.at(c);
    if (c == method) {
      throw SpecError("method under test must not be in the core set");
    }
    if (std::find(allowed.begin(), allowed.end(), c) == allowed.end()) {
      allowed.push_back(c);
    }
  }
  std::sort(allowed.begin(), allowed.end());
  allowed.push_back(method);

  if (params.invocations < 1 || params.sequences < 1 || params.values < 1) return;
  if (params.sequences > params.invocations) return;
  if (!options.allow_method_subset &&
      static_cast<int>(allowed.size()) > params.invocations) {
    return;  // cannot use every method at least once
  }

  Builder b(spec, options, params, method);
  b.num_methods = static_cast<int>(allowed.size());
  for (int i = 0; i < b.num_methods; ++i) {
    auto instances = method_instantiations(spec.at(allowed[i]), params.values);
    if (instances.empty()) {
      if (allowed[i] == method) return;             // target must occur
      if (!options.allow_method_subset) return;     // core method unusable
      continue;
    }
    for (Invocation& inv : instances) {
      uint32_t mask = argument_value_mask(inv);
      b.pool.push_back({std::move(inv), i, mask, allowed[i] == method});
    }
  }
  b.full_value_mask = (1u << params.values) - 1;
  b.hb_choices = happens_before_choices(params.sequences, options.full_happens_before);
  b.sink = &fn;
  b.run();
}

std::vector<Harness> construct_harnesses(const std::vector<std::string>& core,
                                         const std::string& method,
                                         EnumParams params,
                                         const SequentialSpec& spec,
                                         const EnumOptions& options) {
  std::vector<Harness> out;
  for_each_constructed_harness(core, method, params, spec, options,
                               [&](const Harness& h) {
                                 out.push_back(h);
                                 return true;
                               });
  return out;
}

void shuffle_harnesses(std::vector<Harness>& hs, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (size_t i = hs.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(hs[i - 1], hs[j]);
  }
}

}  // namespace atomcheck
