#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "atomcheck/adt_spec.hpp"
#include "atomcheck/harness.hpp"
#include "atomcheck/outcome.hpp"

namespace atomcheck {

/// The set of outcomes a harness admits under atomic (linearized)
/// execution. Precomputed once per harness and then shared read-only by
/// every stress worker.
struct AtomicOutcomeSet {
  std::string harness_text;
  int width = 0;  // number of invocations / outcome slots
  std::unordered_set<Outcome, OutcomeHash> outcomes;

  bool contains(const Outcome& o) const { return outcomes.count(o) > 0; }
};

/// Enumerates the linearizations of the harness — every total order of its
/// invocations consistent with per-sequence program order and the
/// sequence-level happens-before — each exactly once. `order` lists
/// invocation indices (listing order) in execution order. Return false
/// from the callback to stop early.
void for_each_linearization(const Harness& h,
                            const std::function<bool(const std::vector<int>&)>& fn);

std::vector<std::vector<int>> linearizations(const Harness& h);
uint64_t count_linearizations(const Harness& h);

/// Replays the invocations in `order` from the empty state and scatters
/// the return values back into listing-order outcome slots.
Outcome replay_linearization(const Harness& h, const std::vector<int>& order,
                             const SequentialSpec& spec);

/// Executes every linearization on the sequential spec and collects the
/// deduplicated outcome set.
AtomicOutcomeSet atomic_outcomes(const Harness& h, const SequentialSpec& spec);

bool is_atomic_outcome(const Outcome& o, const AtomicOutcomeSet& set);

}  // namespace atomcheck
