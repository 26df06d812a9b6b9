#include "atomcheck/poset.hpp"

#include <algorithm>

namespace atomcheck {

OrderPairs transitive_closure(int n, const OrderPairs& pairs) {
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [i, j] : pairs) reach[i][j] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  OrderPairs out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (reach[i][j]) out.emplace(i, j);
    }
  }
  return out;
}

OrderPairs transitive_reduction(int n, const OrderPairs& pairs) {
  OrderPairs closure = transitive_closure(n, pairs);
  OrderPairs out;
  for (const auto& [i, j] : closure) {
    bool redundant = false;
    for (int k = 0; k < n && !redundant; ++k) {
      if (k == i || k == j) continue;
      if (closure.count({i, k}) && closure.count({k, j})) redundant = true;
    }
    if (!redundant) out.emplace(i, j);
  }
  return out;
}

bool is_strict_partial_order(int n, const OrderPairs& pairs) {
  OrderPairs closure = transitive_closure(n, pairs);
  for (int i = 0; i < n; ++i) {
    if (closure.count({i, i})) return false;
  }
  return true;
}

std::vector<std::vector<int>> topological_layers(int n, const OrderPairs& pairs) {
  OrderPairs closure = transitive_closure(n, pairs);
  std::vector<int> depth(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [i, j] : closure) {
      if (depth[j] < depth[i] + 1) {
        depth[j] = depth[i] + 1;
        changed = true;
      }
    }
  }
  int max_depth = 0;
  for (int d : depth) max_depth = std::max(max_depth, d);
  std::vector<std::vector<int>> layers(max_depth + 1);
  for (int i = 0; i < n; ++i) layers[depth[i]].push_back(i);
  return layers;
}

OrderPairs relabel(const OrderPairs& pairs, const std::vector<int>& new_index) {
  OrderPairs out;
  for (const auto& [i, j] : pairs) out.emplace(new_index[i], new_index[j]);
  return out;
}

}  // namespace atomcheck
