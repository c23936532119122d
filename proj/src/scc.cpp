#include "reactsyn/scc.hpp"

#include <algorithm>

namespace reactsyn {

SccResult strongly_connected_components(const std::vector<std::vector<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  SccResult result;
  result.component.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;  // (vertex, next edge)
  int counter = 0;

  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] >= 0) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      const auto vi = static_cast<std::size_t>(v);
      if (edge == 0 && index[vi] < 0) {
        index[vi] = low[vi] = counter++;
        stack.push_back(v);
        on_stack[vi] = true;
      }
      if (edge < succ[vi].size()) {
        const int w = succ[vi][edge++];
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] < 0) {
          call.push_back({w, 0});
        } else if (on_stack[wi]) {
          low[vi] = std::min(low[vi], index[wi]);
        }
        continue;
      }
      if (low[vi] == index[vi]) {
        const int id = result.count++;
        bool cyclic = false;
        int size = 0;
        for (;;) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          result.component[static_cast<std::size_t>(w)] = id;
          ++size;
          if (w == v) break;
        }
        if (size > 1) cyclic = true;
        for (int w : succ[vi])
          if (w == v) cyclic = true;
        result.cyclic.push_back(cyclic);
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) {
        const auto pi = static_cast<std::size_t>(call.back().first);
        low[pi] = std::min(low[pi], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  return result;
}

std::vector<bool> reachable_from(const std::vector<std::vector<int>>& succ, int start) {
  std::vector<bool> seen(succ.size(), false);
  if (start < 0 || static_cast<std::size_t>(start) >= succ.size()) return seen;
  std::vector<int> work{start};
  seen[static_cast<std::size_t>(start)] = true;
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    for (int w : succ[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        work.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace reactsyn
