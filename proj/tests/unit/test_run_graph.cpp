#include <doctest.h>

#include <random>
#include <sstream>

#include "common/graph_oracle.hpp"
#include "reactsyn/run_graph.hpp"
#include "reactsyn/scc.hpp"

using namespace reactsyn;

namespace {

RunGraph graph(int n, std::vector<std::pair<int, int>> edges) {
  RunGraph g;
  g.succ.resize(static_cast<std::size_t>(n));
  g.label.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) g.label[static_cast<std::size_t>(v)] = v;
  for (auto [a, b] : edges) g.succ[static_cast<std::size_t>(a)].push_back(b);
  return g;
}

AlphabetSpec in_out() {
  AlphabetSpec a;
  a.inputs = {"in"};
  a.outputs = {"out"};
  return a;
}

}  // namespace

TEST_CASE("annotation validity on hand-made graphs") {
  const RunGraph loop = graph(1, {{0, 0}});
  CHECK(check_annotation_valid(loop, GraphCondition::buchi({true}), 0, {0}, 1));
  for (std::uint64_t x = 0; x <= 3; ++x) CHECK_FALSE(check_annotation_valid(loop, GraphCondition::buchi({false}), 0, {x}, 3));

  const RunGraph chain = graph(2, {{0, 1}});
  CHECK(check_annotation_valid(chain, GraphCondition::co_buchi({true, false}), 0, {1, 0}, 2));
  CHECK_FALSE(check_annotation_valid(chain, GraphCondition::co_buchi({true, false}), 0, {0, 0}, 2));
  CHECK_FALSE(check_annotation_valid(chain, GraphCondition::co_buchi({true, false}), 0, {3, 0}, 2));

  // Unreachable vertices are unconstrained.
  const RunGraph orphan = graph(2, {{1, 1}});
  CHECK(check_annotation_valid(orphan, GraphCondition::buchi({false, false}), 0, {0, 0}, 2));
}

TEST_CASE("acceptance by SCC analysis") {
  CHECK(graph_satisfies_acceptance(graph(1, {{0, 0}}), GraphCondition::buchi({true})));
  CHECK_FALSE(graph_satisfies_acceptance(graph(1, {{0, 0}}), GraphCondition::buchi({false})));
  const RunGraph two = graph(2, {{0, 1}, {1, 0}});
  CHECK_FALSE(graph_satisfies_acceptance(two, GraphCondition::streett({{{true, false}, {false, false}}})));
  CHECK(graph_satisfies_acceptance(two, GraphCondition::streett({{{true, false}, {false, true}}})));
  // Without infinite paths every condition holds.
  const RunGraph dag = graph(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(graph_satisfies_acceptance(dag, GraphCondition::buchi({false, false, false})));
  CHECK(graph_satisfies_acceptance(dag, GraphCondition::co_buchi({true, true, true})));
  CHECK(graph_satisfies_acceptance(dag, GraphCondition::streett({{{true, true, true}, {false, false, false}}})));
}

TEST_CASE("Streett annotation construction on a small example") {
  // v0 -> v1 -> v1 with A = {v0}, G = {v1}.
  const RunGraph g = graph(2, {{0, 1}, {1, 1}});
  const GraphCondition cond = GraphCondition::streett({{{true, false}, {false, true}}});
  const auto ann = construct_streett_annotations(g, cond);
  REQUIRE(ann.has_value());
  CHECK((*ann)[0] == Annotation{1, 0});
  CHECK(check_annotation_valid(g, cond, 0, (*ann)[0], 2));

  CHECK_FALSE(construct_streett_annotations(graph(2, {{0, 1}, {1, 0}}),
                                            GraphCondition::streett({{{true, false}, {false, false}}}))
                  .has_value());

  const auto all_good = construct_streett_annotations(
      graph(3, {{0, 1}, {1, 2}, {2, 0}}), GraphCondition::streett({{{true, true, true}, {true, true, true}}}));
  REQUIRE(all_good.has_value());
  CHECK((*all_good)[0] == Annotation{0, 0, 0});
}

TEST_CASE("SCC verdict matches infinity-set enumeration and annotation existence") {
  std::mt19937 rng(2024);
  int accepted = 0, rejected = 0;
  for (int k = 0; k < 400; ++k) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const RunGraph g = oracle::random_graph(rng, n, 0.3);
    const GraphCondition cond = oracle::random_condition(rng, n);
    const bool scc = graph_satisfies_acceptance(g, cond);
    CHECK(scc == oracle::accepts_by_subsets(g, cond));
    const auto ann = construct_streett_annotations(g, cond);
    CHECK(ann.has_value() == scc);
    if (ann) {
      for (int i = 0; i < cond.num_relations(); ++i)
        CHECK(check_annotation_valid(g, cond, i, (*ann)[static_cast<std::size_t>(i)], static_cast<std::uint64_t>(n)));
    }
    if (n <= 4) CHECK(oracle::annotation_exists(g, cond, static_cast<std::uint64_t>(n)) == scc);
    (scc ? accepted : rejected)++;
  }
  CHECK(accepted > 50);
  CHECK(rejected > 50);
}

TEST_CASE("Buechi and co-Buechi relations are Streett special cases") {
  std::mt19937 rng(77);
  for (int k = 0; k < 300; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const RunGraph g = oracle::random_graph(rng, n, 0.35);
    const auto f = oracle::random_set(rng, n, 0.4);
    Annotation lambda(static_cast<std::size_t>(n));
    for (auto& x : lambda) x = rng() % 4;
    const std::vector<bool> all(static_cast<std::size_t>(n), true), none(static_cast<std::size_t>(n), false);
    CHECK(check_annotation_valid(g, GraphCondition::buchi(f), 0, lambda, 3) ==
          check_annotation_valid(g, GraphCondition::streett({{all, f}}), 0, lambda, 3));
    CHECK(check_annotation_valid(g, GraphCondition::co_buchi(f), 0, lambda, 3) ==
          check_annotation_valid(g, GraphCondition::streett({{f, none}}), 0, lambda, 3));
  }
}

TEST_CASE("word automaton times Mealy machine") {
  const WordAutomaton ucb = negate_and_dualize(parse_ltl("G(in <-> out)", in_out()), 2);
  // One-state machine copying the input.
  MealyMachine copy;
  copy.num_inputs = 1;
  copy.num_outputs = 1;
  copy.next = {{0, 0}};
  copy.out = {{0, 1}};
  const RunGraph g = run_graph_word_on_mealy(ucb, copy);
  CHECK(g.num_vertices() == ucb.num_states() * 1);
  const auto reach = reachable_from(g.succ, g.initial);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (reach[static_cast<std::size_t>(v)]) CHECK_FALSE(ucb.marked[static_cast<std::size_t>(g.label[static_cast<std::size_t>(v)])]);
  CHECK(graph_satisfies_acceptance(g, GraphCondition::co_buchi(ucb.marked)));

  // Negating machine with an unreachable extra state.
  MealyMachine neg;
  neg.num_inputs = 1;
  neg.num_outputs = 1;
  neg.next = {{0, 0}, {1, 1}};
  neg.out = {{1, 0}, {0, 1}};
  const RunGraph h = run_graph_word_on_mealy(ucb, neg);
  CHECK(h.num_vertices() == ucb.num_states() * 2);
  CHECK_FALSE(graph_satisfies_acceptance(h, GraphCondition::co_buchi(ucb.marked)));
  const auto hr = reachable_from(h.succ, h.initial);
  for (int q = 0; q < ucb.num_states(); ++q) CHECK_FALSE(hr[static_cast<std::size_t>(word_mealy_vertex(q, 1, 2))]);
}

TEST_CASE("two-way automaton on a program tree") {
  const AlphabetSpec a = in_out();
  const ProgramTree t = parse_program("while(tt) { out = in; InOut }", a);
  for (const char* spec : {"G(in <-> out)", "G(in <-> X out)", "G F out"}) {
    const Ltl f = parse_ltl(spec, a);
    const TwoWayAutomaton bp = build_specification_automaton(f, t.vars, IoMode::InOut);
    const RunGraph g = run_graph_twoway_on_tree(bp, t);
    CHECK(g.num_vertices() == bp.num_states() * t.size() * 3);
    CHECK(g.initial == twoway_vertex(bp.initial(), 0, Dir::D, t.size()));
    CHECK_FALSE(find_reachable_dead_end(g).has_value());
    const bool expected = std::string(spec) == "G(in <-> out)";
    CHECK(graph_satisfies_acceptance(g, GraphCondition::streett(bp.pairs)) == expected);
    // Execution vertices at non-I/O labels have one successor.
    const auto reach = reachable_from(g.succ, g.initial);
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (!reach[static_cast<std::size_t>(v)]) continue;
      const int node = (v / 3) % t.size();
      if (!is_io(t.at(node).label.kind)) CHECK(g.succ[static_cast<std::size_t>(v)].size() == 1);
    }
  }
}

TEST_CASE("terminating programs reach a dead end") {
  const AlphabetSpec a = in_out();
  const ProgramTree t = parse_program("InOut; out = in; InOut", a);
  const TwoWayAutomaton bp = build_specification_automaton(parse_ltl("G(in <-> out)", a), t.vars, IoMode::InOut);
  const RunGraph g = run_graph_twoway_on_tree(bp, t);
  CHECK(find_reachable_dead_end(g).has_value());
  // Finite paths satisfy every condition vacuously.
  CHECK(graph_satisfies_acceptance(g, GraphCondition::streett(bp.pairs)));
}

TEST_CASE("loops without output violate reactiveness") {
  const AlphabetSpec a = in_out();
  const ProgramTree t = parse_program("InOut; while (tt) { skip }", a);
  const TwoWayAutomaton bp = build_specification_automaton(parse_ltl("G(in <-> out)", a), t.vars, IoMode::InOut);
  const RunGraph g = run_graph_twoway_on_tree(bp, t);
  CHECK_FALSE(find_reachable_dead_end(g).has_value());
  CHECK_FALSE(graph_satisfies_acceptance(g, GraphCondition::streett(bp.pairs)));
}

TEST_CASE("edge list dump") {
  std::ostringstream out;
  write_run_graph(graph(2, {{0, 1}, {1, 1}}), out);
  CHECK(out.str() == "initial 0\n0 0 -> 1\n1 1 -> 1\n");
}
