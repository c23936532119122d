#include <string>
#include <unordered_map>

#include "reactsyn/encoding.hpp"
#include "reactsyn/error.hpp"
#include "reactsyn/run_graph.hpp"

namespace reactsyn {

namespace {

GraphCondition condition_of(const TwoWayAutomaton& a) {
  switch (a.acceptance) {
    case TreeAcceptance::Buchi: return GraphCondition::buchi(a.accepting);
    case TreeAcceptance::CoBuchi: return GraphCondition::co_buchi(a.accepting);
    case TreeAcceptance::Streett: break;
  }
  return GraphCondition::streett(a.pairs);
}

struct Vertex {
  int p;
  int t;
  Dir d;
};

}  // namespace

TwoWayInstance encode_twoway(const TwoWayAutomaton& a, int nodes, std::optional<std::uint64_t> bound) {
  ConstraintSystem cs;
  TreeEncoding tree(cs, a.vars(), a.alphabet(), nodes);
  TwoWayInstance inst{std::move(cs), std::move(tree)};
  ConstraintSystem& c = inst.cs;
  const TreeEncoding& tr = inst.tree;

  const GraphCondition cond = condition_of(a);
  const int relations = cond.num_relations();
  const std::vector<int> states = a.reachable_states();
  inst.automaton_states = a.num_states();
  inst.reachable_states = static_cast<int>(states.size());
  inst.bound = bound.value_or(static_cast<std::uint64_t>(states.size()) * static_cast<std::uint64_t>(nodes) * 3);
  if (inst.bound < 1) inst.bound = 1;
  const unsigned width = bits_for(inst.bound);
  const bool cap = inst.bound < (std::uint64_t{1} << width) - 1;

  const int k = tr.num_labels();
  auto key = [&](int p, int t, Dir d) {
    return (static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(nodes) + static_cast<std::uint64_t>(t)) * 3 +
           static_cast<std::uint64_t>(d);
  };

  // Vertices are allocated on first reference and processed in that order.
  std::unordered_map<std::uint64_t, int> vertex_id;
  std::vector<Vertex> vertices;
  std::vector<Lit> reach;
  std::vector<std::vector<BitVec>> ann(static_cast<std::size_t>(relations));
  auto vertex = [&](int p, int t, Dir d) {
    const auto [it, fresh] = vertex_id.try_emplace(key(p, t, d), static_cast<int>(vertices.size()));
    if (fresh) {
      const std::string tag = "[" + std::to_string(p) + "," + std::to_string(t) + "," + to_string(d) + "]";
      vertices.push_back({p, t, d});
      reach.push_back(c.new_named("reach" + tag));
      for (int i = 0; i < relations; ++i) {
        ann[static_cast<std::size_t>(i)].push_back(c.alloc_bitvec("ann" + std::to_string(i) + tag, width));
        if (cap) c.assert_leq_const(ann[static_cast<std::size_t>(i)].back(), inst.bound);
      }
    }
    return it->second;
  };

  std::unordered_map<std::uint64_t, std::vector<TwoWayTransition>> delta_cache;
  auto delta = [&](int p, int sigma, Dir d) -> const std::vector<TwoWayTransition>& {
    const std::uint64_t dk = (static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(k) +
                              static_cast<std::uint64_t>(sigma)) * 3 + static_cast<std::uint64_t>(d);
    auto it = delta_cache.find(dk);
    if (it == delta_cache.end())
      it = delta_cache.emplace(dk, a.delta(p, tr.alphabet()[static_cast<std::size_t>(sigma)], d)).first;
    return it->second;
  };

  std::unordered_map<std::uint64_t, Lit> edge_lit;
  std::vector<std::pair<int, int>> edges;
  std::vector<Lit> edge_lits;
  std::vector<Lit> clause;

  c.add_clause({reach[static_cast<std::size_t>(vertex(a.initial(), 0, Dir::D))]});
  for (std::size_t next = 0; next < vertices.size(); ++next) {
    const Vertex v = vertices[next];
    const Lit rv = reach[next];
    for (int sigma = 0; sigma < k; ++sigma) {
      const Lit x = tr.label(v.t, sigma);
      if (x == 0) continue;
      const auto& trans = delta(v.p, sigma, v.d);
      // Universal branching: every transition must land inside the tree,
      // and a configuration without transitions ends the walk.
      bool blocked = trans.empty();
      for (const auto& tw : trans) blocked = blocked || tr.targets(v.t, tw.move).empty();
      if (blocked) {
        c.add_clause({-rv, -x});
        continue;
      }
      for (const auto& tw : trans) {
        for (const Placement& pl : tr.targets(v.t, tw.move)) {
          const int w = vertex(tw.state, pl.node, pl.dir);
          const std::uint64_t ek = static_cast<std::uint64_t>(next) << 32 | static_cast<std::uint32_t>(w);
          auto [it, fresh] = edge_lit.try_emplace(ek, 0);
          if (fresh) {
            it->second = c.new_var();
            edges.emplace_back(static_cast<int>(next), w);
            edge_lits.push_back(it->second);
          }
          clause.assign({-rv, -x});
          for (Lit g : pl.guard) clause.push_back(-g);
          clause.push_back(it->second);
          c.add_clause(clause);
        }
      }
    }
  }

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [from, to] = edges[e];
    const Lit on = edge_lits[e];
    c.add_clause({-on, reach[static_cast<std::size_t>(to)]});
    const Lit guard[] = {on};
    for (int i = 0; i < relations; ++i) {
      const Relation rel = required_relation(cond, i, vertices[static_cast<std::size_t>(from)].p);
      if (rel == Relation::True) continue;
      if (from == to) {
        if (rel == Relation::Greater) c.add_clause({-on});
        continue;
      }
      const auto& lam = ann[static_cast<std::size_t>(i)];
      c.assert_compare(lam[static_cast<std::size_t>(from)], lam[static_cast<std::size_t>(to)],
                       rel == Relation::Greater ? CompareOp::Greater : CompareOp::GreaterEqual, guard);
    }
  }
  return inst;
}

ProgramTree decode_twoway(const TwoWayInstance& inst, const Model& m) { return inst.tree.decode(m); }

}  // namespace reactsyn
