#include "reactsyn/verify.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "reactsyn/run_graph.hpp"
#include "reactsyn/scc.hpp"
#include "reactsyn/word_automaton.hpp"

namespace reactsyn {

namespace {

// Shortest path from `from` to `to` over successor lists, as a vertex
// sequence that starts after `from`. Requires at least one edge.
std::vector<int> shortest_path(const RunGraph& g, int from, int to) {
  std::vector<int> prev(static_cast<std::size_t>(g.num_vertices()), -1);
  std::vector<bool> seen(static_cast<std::size_t>(g.num_vertices()), false);
  std::deque<int> work;
  for (int w : g.succ[static_cast<std::size_t>(from)]) {
    if (!seen[static_cast<std::size_t>(w)]) {
      seen[static_cast<std::size_t>(w)] = true;
      prev[static_cast<std::size_t>(w)] = from;
      work.push_back(w);
    }
  }
  while (!work.empty() && !seen[static_cast<std::size_t>(to)]) {
    const int v = work.front();
    work.pop_front();
    for (int w : g.succ[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        prev[static_cast<std::size_t>(w)] = v;
        work.push_back(w);
      }
    }
  }
  std::vector<int> path;
  if (!seen[static_cast<std::size_t>(to)]) return path;
  // Only first-hop vertices have `from` as predecessor.
  for (int v = to;; v = prev[static_cast<std::size_t>(v)]) {
    path.push_back(v);
    if (prev[static_cast<std::size_t>(v)] == from) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Input/output step that realizes the run-graph edge v -> w.
IoStep edge_step(const WordAutomaton& a, const MealyMachine& m, int v, int w) {
  const int ms = m.num_states();
  const int q = v / ms, x = v % ms;
  const int q2 = w / ms, x2 = w % ms;
  for (std::uint32_t in = 0; in < (1U << m.num_inputs); ++in) {
    if (m.next[static_cast<std::size_t>(x)][in] != x2) continue;
    const std::uint32_t out = m.out[static_cast<std::size_t>(x)][in];
    const auto& succ = a.successors(q, in | (out << m.num_inputs));
    if (std::find(succ.begin(), succ.end(), q2) != succ.end()) return {in, out};
  }
  throw Error("run graph edge without a witnessing input");
}

Counterexample find_counterexample(const WordAutomaton& a, const MealyMachine& m, const RunGraph& g) {
  const auto reach = reachable_from(g.succ, g.initial);
  const SccResult scc = strongly_connected_components(g.succ);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!reach[static_cast<std::size_t>(v)] || !a.marked[static_cast<std::size_t>(g.label[static_cast<std::size_t>(v)])])
      continue;
    if (!scc.cyclic[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(v)])]) continue;
    Counterexample cx;
    int cur = g.initial;
    if (v != g.initial) {
      for (int w : shortest_path(g, g.initial, v)) {
        cx.stem.push_back(edge_step(a, m, cur, w));
        cur = w;
      }
    }
    for (int w : shortest_path(g, v, v)) {
      cx.loop.push_back(edge_step(a, m, cur, w));
      cur = w;
    }
    return cx;
  }
  throw Error("no rejecting cycle found for a failing program");
}

}  // namespace

VerifyResult verify_program(const ProgramTree& tree, const Ltl& formula) {
  const MealyMachine mealy = minimize_mealy(extract_mealy(tree));
  const WordAutomaton ucb = negate_and_dualize(formula, tree.vars.num_inputs + tree.vars.num_outputs);
  const RunGraph g = run_graph_word_on_mealy(ucb, mealy);
  const GraphCondition cond = GraphCondition::co_buchi(ucb.marked);

  VerifyResult r;
  r.mealy_states = mealy.num_states();
  r.run_graph_vertices = g.num_vertices();
  r.scc_pass = graph_satisfies_acceptance(g, cond);
  const auto ann = construct_streett_annotations(g, cond);
  r.annotation_pass =
      ann.has_value() && check_annotation_valid(g, cond, 0, ann->front(), static_cast<std::uint64_t>(g.num_vertices()));
  if (r.scc_pass != r.annotation_pass) throw Error("verification procedures disagree");
  r.pass = r.scc_pass;
  if (!r.pass) r.counterexample = find_counterexample(ucb, mealy, g);
  return r;
}

std::string format_trace(const std::vector<IoStep>& steps, const AlphabetSpec& alphabet) {
  std::ostringstream out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (k) out << ' ';
    out << '{';
    bool first = true;
    for (int j = 0; j < alphabet.num_inputs(); ++j) {
      out << (first ? "" : ",") << ((steps[k].input >> j) & 1U ? "" : "!") << alphabet.inputs[static_cast<std::size_t>(j)];
      first = false;
    }
    out << " /";
    for (int j = 0; j < alphabet.num_outputs(); ++j) {
      out << (j ? "," : " ") << ((steps[k].output >> j) & 1U ? "" : "!") << alphabet.outputs[static_cast<std::size_t>(j)];
    }
    out << '}';
  }
  return out.str();
}

}  // namespace reactsyn
