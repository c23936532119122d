#include "reactsyn/run_graph.hpp"

#include <algorithm>
#include <ostream>

#include "reactsyn/scc.hpp"

namespace reactsyn {

GraphCondition GraphCondition::buchi(std::vector<bool> f) {
  GraphCondition c;
  c.kind = TreeAcceptance::Buchi;
  c.marked = std::move(f);
  return c;
}

GraphCondition GraphCondition::co_buchi(std::vector<bool> f) {
  GraphCondition c;
  c.kind = TreeAcceptance::CoBuchi;
  c.marked = std::move(f);
  return c;
}

GraphCondition GraphCondition::streett(std::vector<StreettPair> pairs) {
  GraphCondition c;
  c.kind = TreeAcceptance::Streett;
  c.pairs = std::move(pairs);
  return c;
}

int GraphCondition::num_relations() const {
  return kind == TreeAcceptance::Streett ? static_cast<int>(pairs.size()) : 1;
}

std::vector<StreettPair> GraphCondition::as_streett(int num_states) const {
  const auto n = static_cast<std::size_t>(num_states);
  switch (kind) {
    case TreeAcceptance::Buchi:
      return {StreettPair{std::vector<bool>(n, true), marked}};
    case TreeAcceptance::CoBuchi:
      return {StreettPair{marked, std::vector<bool>(n, false)}};
    case TreeAcceptance::Streett:
      return pairs;
  }
  return {};
}

namespace {

bool in(const std::vector<bool>& set, int state) {
  return state >= 0 && static_cast<std::size_t>(state) < set.size() && set[static_cast<std::size_t>(state)];
}

int num_labels(const RunGraph& g) {
  int n = 0;
  for (int l : g.label) n = std::max(n, l + 1);
  return n;
}

}  // namespace

Relation required_relation(const GraphCondition& cond, int index, int state) {
  switch (cond.kind) {
    case TreeAcceptance::Buchi:
      return in(cond.marked, state) ? Relation::True : Relation::Greater;
    case TreeAcceptance::CoBuchi:
      return in(cond.marked, state) ? Relation::Greater : Relation::GreaterEqual;
    case TreeAcceptance::Streett: {
      const auto& pair = cond.pairs.at(static_cast<std::size_t>(index));
      if (in(pair.g, state)) return Relation::True;
      return in(pair.a, state) ? Relation::Greater : Relation::GreaterEqual;
    }
  }
  return Relation::True;
}

bool relation_holds(Relation rel, std::uint64_t from, std::uint64_t to) {
  switch (rel) {
    case Relation::True: return true;
    case Relation::Greater: return from > to;
    case Relation::GreaterEqual: return from >= to;
  }
  return false;
}

bool check_annotation_valid(const RunGraph& g, const GraphCondition& cond, int index, const Annotation& lambda,
                            std::uint64_t bound) {
  if (lambda.size() != static_cast<std::size_t>(g.num_vertices())) return false;
  const auto reach = reachable_from(g.succ, g.initial);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!reach[static_cast<std::size_t>(v)]) continue;
    if (lambda[static_cast<std::size_t>(v)] > bound) return false;
    const Relation rel = required_relation(cond, index, g.label[static_cast<std::size_t>(v)]);
    for (int w : g.succ[static_cast<std::size_t>(v)]) {
      if (!relation_holds(rel, lambda[static_cast<std::size_t>(v)], lambda[static_cast<std::size_t>(w)])) return false;
    }
  }
  return true;
}

bool graph_satisfies_acceptance(const RunGraph& g, const GraphCondition& cond) {
  const auto reach = reachable_from(g.succ, g.initial);
  for (const auto& pair : cond.as_streett(num_labels(g))) {
    // Drop G vertices entirely; any remaining reachable cycle through A
    // is a path visiting A infinitely often and G finitely often.
    std::vector<std::vector<int>> sub(g.succ.size());
    auto keep = [&](int v) {
      return reach[static_cast<std::size_t>(v)] && !in(pair.g, g.label[static_cast<std::size_t>(v)]);
    };
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (!keep(v)) continue;
      for (int w : g.succ[static_cast<std::size_t>(v)])
        if (keep(w)) sub[static_cast<std::size_t>(v)].push_back(w);
    }
    const SccResult scc = strongly_connected_components(sub);
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (keep(v) && in(pair.a, g.label[static_cast<std::size_t>(v)]) &&
          scc.cyclic[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(v)])]) {
        return false;
      }
    }
  }
  return true;
}

std::optional<std::vector<Annotation>> construct_streett_annotations(const RunGraph& g, const GraphCondition& cond) {
  const auto reach = reachable_from(g.succ, g.initial);
  const auto n = static_cast<std::size_t>(g.num_vertices());
  const auto pairs = cond.as_streett(num_labels(g));
  std::vector<Annotation> out;
  for (const auto& pair : pairs) {
    auto good = [&](int v) { return in(pair.g, g.label[static_cast<std::size_t>(v)]); };
    auto bad = [&](int v) { return !good(v) && in(pair.a, g.label[static_cast<std::size_t>(v)]); };
    // Reachable part with the out-edges of G removed.
    std::vector<std::vector<int>> sub(n);
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (!reach[static_cast<std::size_t>(v)] || good(v)) continue;
      sub[static_cast<std::size_t>(v)] = g.succ[static_cast<std::size_t>(v)];
    }
    const SccResult scc = strongly_connected_components(sub);
    const auto comps = static_cast<std::size_t>(scc.count);
    std::vector<std::uint64_t> bad_count(comps, 0);
    std::vector<std::vector<int>> members(comps);
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (!reach[static_cast<std::size_t>(v)]) continue;
      const auto c = static_cast<std::size_t>(scc.component[static_cast<std::size_t>(v)]);
      members[c].push_back(v);
      if (bad(v)) {
        if (scc.cyclic[c]) return std::nullopt;
        ++bad_count[c];
      }
    }
    // Components come in reverse topological order, so successors of
    // component c have ids <= c and are final when c is processed.
    std::vector<std::uint64_t> value(comps, 0);
    for (std::size_t c = 0; c < comps; ++c) {
      std::uint64_t best = 0;
      for (int v : members[c]) {
        for (int w : sub[static_cast<std::size_t>(v)]) {
          const auto cw = static_cast<std::size_t>(scc.component[static_cast<std::size_t>(w)]);
          if (cw != c) best = std::max(best, value[cw]);
        }
      }
      value[c] = bad_count[c] + best;
    }
    Annotation lambda(n, 0);
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (!reach[static_cast<std::size_t>(v)] || good(v)) continue;
      lambda[static_cast<std::size_t>(v)] = value[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(v)])];
    }
    out.push_back(std::move(lambda));
  }
  return out;
}

std::optional<int> find_reachable_dead_end(const RunGraph& g) {
  const auto reach = reachable_from(g.succ, g.initial);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (reach[static_cast<std::size_t>(v)] && g.succ[static_cast<std::size_t>(v)].empty()) return v;
  return std::nullopt;
}

RunGraph run_graph_word_on_mealy(const WordAutomaton& a, const MealyMachine& m) {
  if (a.num_atoms != m.num_inputs + m.num_outputs) throw Error("automaton and Mealy machine alphabets differ");
  RunGraph g;
  const int ms = m.num_states();
  g.succ.resize(static_cast<std::size_t>(a.num_states() * ms));
  g.label.resize(g.succ.size());
  g.initial = word_mealy_vertex(a.initial, m.initial, ms);
  const std::uint32_t letters = 1U << m.num_inputs;
  for (int q = 0; q < a.num_states(); ++q) {
    for (int x = 0; x < ms; ++x) {
      const int v = word_mealy_vertex(q, x, ms);
      g.label[static_cast<std::size_t>(v)] = q;
      auto& out = g.succ[static_cast<std::size_t>(v)];
      for (std::uint32_t i = 0; i < letters; ++i) {
        const Letter l = i | (m.out[static_cast<std::size_t>(x)][i] << m.num_inputs);
        for (int q2 : a.successors(q, l)) out.push_back(word_mealy_vertex(q2, m.next[static_cast<std::size_t>(x)][i], ms));
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  return g;
}

RunGraph run_graph_twoway_on_tree(const TwoWayAutomaton& a, const ProgramTree& tree) {
  const int nodes = tree.size();
  const auto parent = tree.parents();
  RunGraph g;
  const auto total = static_cast<std::size_t>(a.num_states()) * static_cast<std::size_t>(nodes) * 3;
  g.succ.resize(total);
  g.label.resize(total);
  for (std::size_t v = 0; v < total; ++v) g.label[v] = static_cast<int>(v / 3 / static_cast<std::size_t>(nodes));
  g.initial = twoway_vertex(a.initial(), 0, Dir::D, nodes);
  std::vector<bool> seen(total, false);
  std::vector<int> work{g.initial};
  seen[static_cast<std::size_t>(g.initial)] = true;
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    const int d = v % 3;
    const int t = (v / 3) % nodes;
    const int p = v / 3 / nodes;
    const auto& node = tree.at(t);
    auto& out = g.succ[static_cast<std::size_t>(v)];
    for (const auto& tr : a.delta(p, node.label, static_cast<Dir>(d))) {
      int target = -1;
      Dir dir = Dir::D;
      switch (tr.move) {
        case Move::L: target = node.left; break;
        case Move::R: target = node.right; break;
        case Move::RL:
        case Move::RR:
          if (node.right >= 0) target = tr.move == Move::RL ? tree.at(node.right).left : tree.at(node.right).right;
          break;
        case Move::U:
          target = parent[static_cast<std::size_t>(t)];
          if (target >= 0) dir = tree.at(target).left == t ? Dir::L : Dir::R;
          break;
      }
      if (target < 0) continue;
      const int w = twoway_vertex(tr.state, target, dir, nodes);
      out.push_back(w);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        work.push_back(w);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return g;
}

void write_run_graph(const RunGraph& g, std::ostream& out) {
  out << "initial " << g.initial << '\n';
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int w : g.succ[static_cast<std::size_t>(v)]) out << v << ' ' << g.label[static_cast<std::size_t>(v)] << " -> " << w << '\n';
  }
}

}  // namespace reactsyn
