#pragma once

#include <vector>

namespace reactsyn {

/// Strongly connected components of a graph given as adjacency lists.
/// Component ids are in reverse topological order: every edge u -> v
/// satisfies comp[u] >= comp[v].
struct SccResult {
  std::vector<int> component;
  int count = 0;
  /// True if the component has a cycle (size > 1 or a self-loop).
  std::vector<bool> cyclic;
};

SccResult strongly_connected_components(const std::vector<std::vector<int>>& succ);

/// Vertices reachable from `start` (inclusive).
std::vector<bool> reachable_from(const std::vector<std::vector<int>>& succ, int start);

}  // namespace reactsyn
