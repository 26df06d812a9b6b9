#pragma once

#include <set>
#include <utility>
#include <vector>

namespace atomcheck {

/// Helpers for small strict partial orders given as sets of (i, j) pairs,
/// i before j, over indices [0, n).
using OrderPairs = std::set<std::pair<int, int>>;

/// Transitive closure (Floyd-Warshall; n is tiny everywhere we use this).
OrderPairs transitive_closure(int n, const OrderPairs& pairs);

/// Transitive reduction of an acyclic relation.
OrderPairs transitive_reduction(int n, const OrderPairs& pairs);

/// True iff the transitive closure is irreflexive.
bool is_strict_partial_order(int n, const OrderPairs& pairs);

/// Longest-path layering: layer k holds the elements whose deepest chain of
/// predecessors has length k. Layers are ordered consistently with the
/// relation.
std::vector<std::vector<int>> topological_layers(int n, const OrderPairs& pairs);

/// Relabel every pair (a, b) to (new_index[a], new_index[b]).
OrderPairs relabel(const OrderPairs& pairs, const std::vector<int>& new_index);

}  // namespace atomcheck
