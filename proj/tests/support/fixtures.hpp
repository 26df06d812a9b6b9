#pragma once

#include <random>
#include <string>
#include <vector>

#include "atomcheck/adt_spec.hpp"
#include "atomcheck/enumerator.hpp"
#include "atomcheck/harness.hpp"

namespace atomcheck::test {

// Map harnesses used throughout the suite.
inline const char* kHarness1 = "[put(0,0)], [clear(); put(1,1); containsKey(1)]";
inline const char* kHarness2 = "[put(0,0); put(2,0)], [clear(); put(1,1)]";
inline const char* kHarness3 =
    "[put(0,0); put(2,0)], [clear(); put(1,1); containsKey(1); get(2)]";
inline const char* kHarness4 =
    "[put(0,0); put(2,0)], [clear(); put(1,1); containsKey(1); get(2)], "
    "[put(3,1)], {0 < 2, 1 < 2}";
// kHarness4 with its sequences listed in a different order and the
// happens-before constraints renamed accordingly.
inline const char* kHarness4Symmetric =
    "[put(3,1)], [put(0,0); put(2,0)], [clear(); put(1,1); containsKey(1); get(2)], "
    "{1 < 0, 2 < 0}";
inline const char* kPutAllHarness = "[putAll({0=1,1=0})], [get(0); remove(1)]";
inline const char* kSizeHarness = "[size()], [put(0,0); put(1,1)]";

/// Random well-formed map harness: up to `max_sequences` sequences, up to
/// `max_invocations` invocations, arguments over [0, value_bound), and a
/// random acyclic happens-before relation.
inline Harness random_map_harness(std::mt19937_64& rng, int max_invocations,
                                  int max_sequences, int value_bound) {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::OrderedMap);
  std::vector<Invocation> pool;
  for (const MethodSpec& m : spec.methods()) {
    for (Invocation& inv : method_instantiations(m, value_bound)) {
      pool.push_back(std::move(inv));
    }
  }
  int invocations =
      1 + static_cast<int>(rng() % static_cast<uint64_t>(max_invocations));
  int sequences = 1 + static_cast<int>(rng() % static_cast<uint64_t>(
                                           std::min(max_sequences, invocations)));
  Harness h;
  h.sequences.resize(sequences);
  for (int s = 0; s < sequences; ++s) {
    h.sequences[s].push_back(pool[rng() % pool.size()]);
  }
  for (int i = sequences; i < invocations; ++i) {
    h.sequences[rng() % sequences].push_back(pool[rng() % pool.size()]);
  }
  // Random happens-before: try a few pairs, keep those that stay acyclic.
  int attempts = static_cast<int>(rng() % 4);
  for (int a = 0; a < attempts; ++a) {
    int i = static_cast<int>(rng() % sequences);
    int j = static_cast<int>(rng() % sequences);
    if (i == j) continue;
    OrderPairs candidate = h.hb;
    candidate.emplace(i, j);
    if (is_strict_partial_order(sequences, candidate)) h.hb = std::move(candidate);
  }
  return h;
}

}  // namespace atomcheck::test
