#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "atomcheck/harness.hpp"
#include "atomcheck/poset.hpp"

namespace atomcheck::test {

/// Independent linear-extension oracle: filters all permutations of
/// [0, n) against the order. Factorial, fine for n <= 8.
inline uint64_t brute_force_extension_count(int n, const OrderPairs& order) {
  OrderPairs closure = transitive_closure(n, order);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  uint64_t count = 0;
  do {
    std::vector<int> position(n);
    for (int i = 0; i < n; ++i) position[perm[i]] = i;
    bool ok = true;
    for (const auto& [a, b] : closure) {
      if (position[a] >= position[b]) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

/// Linear-extension count of a harness's invocation order, computed
/// independently of the oracle module's walk.
inline uint64_t brute_force_linearization_count(const Harness& h) {
  return brute_force_extension_count(h.num_invocations(),
                                     induced_invocation_order(h));
}

/// All sequence permutations of a harness with happens-before constraints
/// renamed accordingly; the harness's full symmetry class.
inline std::vector<Harness> symmetry_class(const Harness& h) {
  int n = h.num_sequences();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Harness> out;
  do {
    Harness g;
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) {
      g.sequences.push_back(h.sequences[perm[i]]);
      inv[perm[i]] = i;
    }
    g.hb = relabel(h.hb, inv);
    out.push_back(std::move(g));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace atomcheck::test
