#include <doctest.h>

#include <functional>
#include <random>
#include <sstream>

#include "reactsyn/run_graph.hpp"
#include "reactsyn/two_way_automaton.hpp"

using namespace reactsyn;

namespace {

AlphabetSpec alphabet(std::vector<std::string> in, std::vector<std::string> out) {
  AlphabetSpec a;
  a.inputs = std::move(in);
  a.outputs = std::move(out);
  return a;
}

// Automaton whose specification part never constrains anything.
TwoWayAutomaton observer(const ProgramVars& vars, IoMode mode) {
  return TwoWayAutomaton(vars, mode, ltl_to_nba(ltl_true(), vars.num_inputs + vars.num_outputs));
}

std::vector<std::uint32_t> random_word(std::mt19937& rng, int len, int inputs) {
  std::vector<std::uint32_t> w(static_cast<std::size_t>(len));
  for (auto& x : w) x = rng() & ((1U << inputs) - 1);
  return w;
}

}  // namespace

TEST_CASE("mu on node addresses") {
  CHECK(mu_step("", Move::L) == std::pair<std::string, Dir>{"L", Dir::D});
  CHECK(mu_step("L", Move::U) == std::pair<std::string, Dir>{"", Dir::L});
  CHECK(mu_step("LR", Move::U) == std::pair<std::string, Dir>{"L", Dir::R});
  CHECK(mu_step("R", Move::RL) == std::pair<std::string, Dir>{"RRL", Dir::D});
  CHECK_THROWS_AS(mu_step("", Move::U), Error);
}

TEST_CASE("state space shape") {
  const AlphabetSpec a = alphabet({"r1", "r2"}, {"o1", "o2"});
  const ProgramVars vars = make_program_vars(a, 4);
  const WordAutomaton spec = ltl_to_nba(parse_ltl("F o1", a), 4);
  const TwoWayAutomaton b = build_b(spec, vars, IoMode::Split);
  // |P_exec| = 2^|B| * |Q| * 2^N_I * 2 * 2
  CHECK(b.num_exec_states() == 16 * b.spec().num_states() * 4 * 2 * 2);
  CHECK(b.spec().num_states() >= spec.num_states());
  CHECK(b.num_states() == 2 * b.num_exec_states());
  for (int p = 0; p < b.num_states(); p += 7) CHECK(b.index(b.state(p)) == p);
  const TwoWayState init = b.state(b.initial());
  CHECK_FALSE(init.expr);
  CHECK_FALSE(init.m_out);
  CHECK(init.s == 0);
  CHECK(init.q == spec.initial);
}

TEST_CASE("while descends into its condition with r unset") {
  const ProgramVars vars = make_program_vars(alphabet({"in"}, {"out"}), 2);
  const TwoWayAutomaton b = observer(vars, IoMode::InOut);
  const auto tr = b.delta(b.initial(), Label{LabelKind::While, -1, {}}, Dir::D);
  REQUIRE(tr.size() == 1);
  CHECK(tr[0].move == Move::L);
  const TwoWayState st = b.state(tr[0].state);
  CHECK(st.expr);
  CHECK_FALSE(st.flag);
}

TEST_CASE("undefined combinations have no transitions") {
  const ProgramVars vars = make_program_vars(alphabet({"in"}, {"out"}), 2);
  const TwoWayAutomaton b = observer(vars, IoMode::Split);
  const int p = b.initial();
  CHECK(b.delta(p, Label{LabelKind::Output, -1, {1}}, Dir::D).empty());  // no input read yet
  CHECK(b.delta(p, Label{LabelKind::True, -1, {}}, Dir::D).empty());     // statement state at an expression
  CHECK(b.delta(p, Label{LabelKind::Then, -1, {}}, Dir::D).empty());
  CHECK(b.delta(p, Label{LabelKind::Skip, -1, {}}, Dir::L).empty());
  CHECK(b.delta(p, Label{LabelKind::Input, -1, {0}}, Dir::D).size() == 2);
}

TEST_CASE("determinism outside input and output labels") {
  const ProgramVars vars = make_program_vars(alphabet({"in"}, {"out"}), 3);
  for (IoMode mode : {IoMode::Split, IoMode::InOut}) {
    const TwoWayAutomaton b = build_b(ltl_to_nba(parse_ltl("!G(in <-> X out)", alphabet({"in"}, {"out"})), 2), vars, mode);
    for (int p : b.reachable_states()) {
      for (const Label& l : b.alphabet()) {
        if (is_io(l.kind)) continue;
        for (Dir d : {Dir::D, Dir::L, Dir::R}) CHECK(b.delta(p, l, d).size() <= 1);
      }
    }
  }
}

TEST_CASE("example code: simulation reaches the output with r2 cleared") {
  const AlphabetSpec a = alphabet({"r1", "r2"}, {"o1", "o2"});
  const ProgramTree t = parse_program(R"(
while(tt) {
  input (r1, r2);
  if(r1) then { r2 = ff } else { skip };
  output (r1, r2)
})",
                                      a);
  const TwoWayAutomaton b = observer(t.vars, IoMode::Split);
  const Simulation sim = simulate(b, t, {0b11});
  CHECK_FALSE(sim.stuck);
  REQUIRE(sim.steps.size() == 1);
  CHECK(sim.steps[0].output == 0b01);  // r1 = 1, r2 = 0
  CHECK(sim.steps == run_program(t, {0b11}));
}

TEST_CASE("automaton simulation matches the interpreter") {
  struct Case {
    const char* text;
    AlphabetSpec a;
    IoMode mode;
  };
  const std::vector<Case> cases{
      {"while(tt) { out = in; InOut }", alphabet({"in"}, {"out"}), IoMode::InOut},
      {"while(tt) { out = var; var = in; InOut }", alphabet({"in"}, {"out"}), IoMode::InOut},
      {"while (tt) { if (upd) { out = in } else { skip }; InOut }", alphabet({"upd", "in"}, {"out"}), IoMode::InOut},
      {"while (tt) { g0 = g1; g1 = not g1; InOut }", alphabet({"r0", "r1"}, {"g0", "g1"}), IoMode::InOut},
      {"while (tt) { input in; out = not out or in; output out }", alphabet({"in"}, {"out"}), IoMode::Split},
      {"while (tt) { input (a, b); while (a) { a = not a; b = not b }; output b }", alphabet({"a", "b"}, {"c"}),
       IoMode::Split},
  };
  std::mt19937 rng(17);
  for (const auto& c : cases) {
    const ProgramTree t = parse_program(c.text, c.a);
    const TwoWayAutomaton b = observer(t.vars, c.mode);
    for (int len = 1; len <= 6; ++len) {
      for (int rep = 0; rep < 10; ++rep) {
        const auto word = random_word(rng, len, c.a.num_inputs());
        const Simulation sim = simulate(b, t, word);
        CHECK_FALSE(sim.stuck);
        CHECK(sim.steps == run_program(t, word));
      }
    }
  }
}

TEST_CASE("terminating and non-alternating programs get stuck") {
  const AlphabetSpec a = alphabet({"in"}, {"out"});
  {
    const ProgramTree t = parse_program("input in; output out", a);
    CHECK(simulate(observer(t.vars, IoMode::Split), t, {1, 0}).stuck);
  }
  {
    const ProgramTree t = parse_program("while (tt) { input in; input in; output out }", a);
    CHECK(simulate(observer(t.vars, IoMode::Split), t, {1, 0}).stuck);
  }
}

TEST_CASE("expression round trip over all small expressions") {
  const AlphabetSpec a = alphabet({"x"}, {"y"});
  ProgramVars vars = make_program_vars(a, 3);
  const TwoWayAutomaton b = observer(vars, IoMode::Split);
  // Expressions of depth <= 3 (a leaf has depth 1) over three variables.
  int checked = 0;
  std::function<void(int, std::vector<ProgramTree::Node>&, std::function<void(int)>)> build;
  build = [&](int depth, std::vector<ProgramTree::Node>& nodes, std::function<void(int)> k) {
    auto leaf = [&](Label l) {
      nodes.push_back({l, -1, -1});
      k(static_cast<int>(nodes.size()) - 1);
      nodes.pop_back();
    };
    leaf(Label{LabelKind::True, -1, {}});
    leaf(Label{LabelKind::False, -1, {}});
    for (int v = 0; v < 3; ++v) leaf(Label{LabelKind::Var, v, {}});
    if (depth <= 1) return;
    const std::size_t mark = nodes.size();
    nodes.push_back({Label{LabelKind::Not, -1, {}}, -1, -1});
    build(depth - 1, nodes, [&](int c) {
      nodes[mark].left = c;
      k(static_cast<int>(mark));
    });
    nodes.resize(mark);
    nodes.push_back({Label{LabelKind::Or, -1, {}}, -1, -1});
    build(depth - 1, nodes, [&](int l) {
      build(depth - 1, nodes, [&](int r) {
        nodes[mark].left = l;
        nodes[mark].right = r;
        k(static_cast<int>(mark));
      });
    });
    nodes.resize(mark);
  };
  std::vector<ProgramTree::Node> nodes;
  // Root: an assignment whose right-hand side is the generated expression.
  nodes.push_back({Label{LabelKind::Assign, 1, {}}, -1, -1});
  build(3, nodes, [&](int root) {
    ProgramTree t;
    t.vars = vars;
    t.nodes = nodes;
    t.nodes[0].left = root;
    for (std::uint32_t s = 0; s < 8; ++s) {
      const auto got = evaluate_with_automaton(b, t, root, s);
      REQUIRE(got.has_value());
      if (*got != eval_bool_expr(t, root, s)) FAIL("mismatch");
      ++checked;
    }
  });
  CHECK(checked == 1265 * 8);  // 5 + 35 + 35 * 35 expressions
}

TEST_CASE("Streett product pairs") {
  const AlphabetSpec a = alphabet({"in"}, {"out"});
  const ProgramVars vars = make_program_vars(a, 2);
  const TwoWayAutomaton bp = build_specification_automaton(parse_ltl("G(in <-> out)", a), vars, IoMode::InOut);
  CHECK(bp.acceptance == TreeAcceptance::Streett);
  REQUIRE(bp.pairs.size() == 2);
  const TwoWayAutomaton b = build_b(ltl_to_nba(parse_ltl("!G(in <-> out)", a), 2), vars, IoMode::InOut);
  CHECK(complement_to_ucb(b).accepting == b.accepting);
  CHECK(complement_to_ucb(b).acceptance == TreeAcceptance::CoBuchi);
  for (int p = 0; p < bp.num_states(); ++p) {
    const TwoWayState st = bp.state(p);
    CHECK(bp.pairs[1].g[static_cast<std::size_t>(p)] == (!st.expr && st.flag));
    CHECK(bp.pairs[1].a[static_cast<std::size_t>(p)]);
    CHECK_FALSE(bp.pairs[0].g[static_cast<std::size_t>(p)]);
    if (bp.pairs[0].a[static_cast<std::size_t>(p)]) CHECK(bp.pairs[1].g[static_cast<std::size_t>(p)]);
  }
}

TEST_CASE("transition table dump") {
  const ProgramVars vars = make_program_vars(alphabet({"in"}, {"out"}), 2);
  const TwoWayAutomaton b = observer(vars, IoMode::InOut);
  std::ostringstream out;
  write_transition_table(b, {b.initial()}, out);
  const std::string text = out.str();
  CHECK(text.find("while D -> expr(") != std::string::npos);
  CHECK(text.find("InOut D -> ") != std::string::npos);
}
