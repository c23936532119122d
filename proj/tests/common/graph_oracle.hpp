#pragma once

// Independent oracles for run-graph acceptance: infinity-set enumeration and
// exhaustive annotation search.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "reactsyn/run_graph.hpp"

namespace oracle {

using reactsyn::GraphCondition;
using reactsyn::RunGraph;

// Random graph over n vertices whose labels are the vertex ids.
inline RunGraph random_graph(std::mt19937& rng, int n, double density) {
  RunGraph g;
  g.succ.resize(static_cast<std::size_t>(n));
  g.label.resize(static_cast<std::size_t>(n));
  std::bernoulli_distribution edge(density);
  for (int v = 0; v < n; ++v) {
    g.label[static_cast<std::size_t>(v)] = v;
    for (int w = 0; w < n; ++w)
      if (edge(rng)) g.succ[static_cast<std::size_t>(v)].push_back(w);
  }
  g.initial = 0;
  return g;
}

inline std::vector<bool> random_set(std::mt19937& rng, int n, double p) {
  std::bernoulli_distribution pick(p);
  std::vector<bool> s(static_cast<std::size_t>(n));
  for (auto&& b : s) b = pick(rng);
  return s;
}

inline GraphCondition random_condition(std::mt19937& rng, int n) {
  switch (rng() % 3) {
    case 0: return GraphCondition::buchi(random_set(rng, n, 0.4));
    case 1: return GraphCondition::co_buchi(random_set(rng, n, 0.3));
    default: {
      std::vector<reactsyn::StreettPair> pairs;
      const int k = 1 + static_cast<int>(rng() % 2);
      for (int i = 0; i < k; ++i) pairs.push_back({random_set(rng, n, 0.4), random_set(rng, n, 0.3)});
      return GraphCondition::streett(pairs);
    }
  }
}

// Acceptance via infinity sets: a path is rejected iff the set of vertices
// it visits infinitely often meets A and avoids G for some pair.
inline bool accepts_by_subsets(const RunGraph& g, const GraphCondition& cond) {
  const int n = g.num_vertices();
  std::vector<bool> reach(static_cast<std::size_t>(n), false);
  std::vector<int> work{g.initial};
  reach[static_cast<std::size_t>(g.initial)] = true;
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    for (int w : g.succ[static_cast<std::size_t>(v)])
      if (!reach[static_cast<std::size_t>(w)]) {
        reach[static_cast<std::size_t>(w)] = true;
        work.push_back(w);
      }
  }
  const auto pairs = cond.as_streett(n);
  // A set S of reachable vertices is the infinity set of some path iff the
  // subgraph induced by S is strongly connected and has an edge.
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v)
      if ((mask >> v) & 1U) ok = reach[static_cast<std::size_t>(v)];
    if (!ok) continue;
    int first = 0;
    while (!((mask >> first) & 1U)) ++first;
    // Forward and backward closure inside S from `first`.
    auto closure = [&](bool forward) {
      std::uint32_t seen = 1U << first;
      std::vector<int> st{first};
      bool has_edge = false;
      while (!st.empty()) {
        const int v = st.back();
        st.pop_back();
        for (int u = 0; u < n; ++u) {
          if (!((mask >> u) & 1U)) continue;
          const auto& from = g.succ[static_cast<std::size_t>(forward ? v : u)];
          const int to = forward ? u : v;
          bool e = false;
          for (int x : from) e = e || x == to;
          if (!e) continue;
          has_edge = true;
          if (!((seen >> u) & 1U)) {
            seen |= 1U << u;
            st.push_back(u);
          }
        }
      }
      return std::pair{seen, has_edge};
    };
    const auto [fw, edge] = closure(true);
    const auto [bw, edge2] = closure(false);
    if (fw != mask || bw != mask || !edge) continue;
    for (const auto& p : pairs) {
      bool meets_a = false, meets_g = false;
      for (int v = 0; v < n; ++v) {
        if (!((mask >> v) & 1U)) continue;
        const int l = g.label[static_cast<std::size_t>(v)];
        meets_a = meets_a || p.a[static_cast<std::size_t>(l)];
        meets_g = meets_g || p.g[static_cast<std::size_t>(l)];
      }
      if (meets_a && !meets_g) return false;
    }
  }
  return true;
}

// Searches all annotations with values in [0, bound] for each basic
// relation independently.
inline bool annotation_exists(const RunGraph& g, const GraphCondition& cond, std::uint64_t bound) {
  const int n = g.num_vertices();
  for (int idx = 0; idx < cond.num_relations(); ++idx) {
    reactsyn::Annotation lambda(static_cast<std::size_t>(n), 0);
    bool found = false;
    std::function<void(int)> rec = [&](int v) {
      if (found) return;
      if (v == n) {
        found = reactsyn::check_annotation_valid(g, cond, idx, lambda, bound);
        return;
      }
      for (std::uint64_t x = 0; x <= bound && !found; ++x) {
        lambda[static_cast<std::size_t>(v)] = x;
        rec(v + 1);
      }
    };
    rec(0);
    if (!found) return false;
  }
  return true;
}

}  // namespace oracle
