#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "common/ltl_oracle.hpp"
#include "common/tree_enum.hpp"
#include "reactsyn/encoding.hpp"

using namespace reactsyn;

namespace {

AlphabetSpec in_out() {
  AlphabetSpec a;
  a.inputs = {"in"};
  a.outputs = {"out"};
  return a;
}

const std::string kBench = REACTSYN_SOURCE_DIR "/benchmarks/";

bool sat(const ConstraintSystem& cs) { return solve(cs, SolverOptions{}).status == SolveStatus::Sat; }

// Pins the guessed tree to `program` (padding beyond its size).
void fix_tree(ConstraintSystem& cs, const TreeEncoding& enc, const ProgramTree& program) {
  const ProgramTree t = canonicalize(program);
  REQUIRE(t.size() <= enc.num_nodes());
  for (int n = 0; n < t.size(); ++n) {
    const int sigma = enc.label_index(t.at(n).label);
    REQUIRE(sigma >= 0);
    REQUIRE(enc.label(n, sigma) != 0);
    cs.add_clause({enc.label(n, sigma)});
    if (t.at(n).right >= 0) cs.add_clause({enc.right_child(n, t.at(n).right)});
  }
  for (int n = t.size(); n < enc.num_nodes(); ++n) cs.add_clause({-enc.used(n)});
}

bool twoway_sat(const Ltl& f, const ProgramVars& vars, IoMode mode, int nodes) {
  const TwoWayAutomaton a = build_specification_automaton(f, vars, mode);
  return sat(encode_twoway(a, nodes).cs);
}

bool direct_sat(const Ltl& f, const ProgramVars& vars, int nodes) {
  const WordAutomaton ucb = negate_and_dualize(f, vars.num_inputs + vars.num_outputs);
  return sat(encode_direct(ucb, vars, nodes).cs);
}

}  // namespace

TEST_CASE("tree encoding models are exactly the program trees") {
  const ProgramVars vars = make_program_vars(in_out(), 2);
  const auto alphabet = program_alphabet(vars, IoMode::InOut);
  oracle::TreeEnumerator en(alphabet);
  for (int n = 1; n <= 4; ++n) {
    ConstraintSystem cs;
    const TreeEncoding enc(cs, vars, alphabet, n);
    cs.add_clause({enc.used(n - 1)});
    std::set<std::string> seen;
    while (true) {
      const SolveResult r = solve(cs, SolverOptions{});
      if (r.status != SolveStatus::Sat) break;
      const ProgramTree raw = enc.decode_raw(r.model);
      const ProgramTree t = enc.decode(r.model);
      CHECK(t.size() == n);
      CHECK(validate_program_tree(t).ok());
      CHECK(same_tree(raw, t));
      seen.insert(print_program(t));
      std::vector<Lit> block;
      for (int x = 0; x < n; ++x) {
        for (int s = 0; s < enc.num_labels(); ++s)
          if (enc.label(x, s) != 0 && r.model.value(enc.label(x, s))) block.push_back(-enc.label(x, s));
        for (int u = 0; u < n; ++u)
          if (enc.right_child(x, u) != 0 && r.model.value(enc.right_child(x, u))) block.push_back(-enc.right_child(x, u));
      }
      cs.add_clause(block);
    }
    // Statement trees minus single leaves, which cannot be roots.
    std::size_t expected = 0;
    for (const auto& s : en.trees(SyntaxClass::Stmt, n))
      if (label_arity(s->label.kind) > 0) ++expected;
    CHECK_MESSAGE(seen.size() == expected, "n = " << n);
  }
}

TEST_CASE("moves resolve through the tree structure") {
  ConstraintSystem cs;
  const ProgramVars vars = make_program_vars(in_out(), 2);
  const TreeEncoding enc(cs, vars, program_alphabet(vars, IoMode::InOut), 6);
  // A move to the left child lands on t+1 without further conditions; the
  // label demanding the move already forces the child to exist.
  const auto left = enc.targets(2, Move::L);
  REQUIRE(left.size() == 1);
  CHECK(left[0].node == 3);
  CHECK(left[0].dir == Dir::D);
  CHECK(left[0].guard.empty());
  const auto right = enc.targets(1, Move::R);
  CHECK(right.size() == 3);
  for (const auto& p : right) CHECK(p.guard == std::vector<Lit>{enc.right_child(1, p.node)});
  const auto up = enc.targets(3, Move::U);
  CHECK(up.size() == 3);
  CHECK(up[0].node == 2);
  CHECK(up[0].dir == Dir::L);
  CHECK(up[1].dir == Dir::R);
  CHECK(enc.targets(0, Move::U).empty());
  CHECK(enc.targets(5, Move::L).empty());
}

TEST_CASE("pinned reference programs are accepted by both encodings") {
  for (const char* name : {"in_out", "in_next_out"}) {
    const SpecFile s = load_spec(kBench + name + ".spec");
    const ProgramTree t = load_program(kBench + "programs/" + name + ".prog", s.alphabet);
    const ProgramVars vars = t.vars;
    {
      TwoWayInstance inst = encode_twoway(build_specification_automaton(s.formula, vars, IoMode::InOut), t.size());
      fix_tree(inst.cs, inst.tree, t);
      CHECK_MESSAGE(sat(inst.cs), name);
    }
    {
      DirectInstance inst = encode_direct(negate_and_dualize(s.formula, 2), vars, t.size());
      fix_tree(inst.cs, inst.tree, t);
      CHECK_MESSAGE(sat(inst.cs), name);
    }
  }
  // The echo program does not delay its input.
  const SpecFile s = load_spec(kBench + "in_next_out.spec");
  const ProgramTree echo = load_program(kBench + "programs/in_out.prog", s.alphabet);
  const ProgramVars vars = make_program_vars(s.alphabet, 3);
  ProgramTree t = echo;
  t.vars = vars;
  TwoWayInstance tw = encode_twoway(build_specification_automaton(s.formula, vars, IoMode::InOut), 6);
  fix_tree(tw.cs, tw.tree, t);
  CHECK_FALSE(sat(tw.cs));
  DirectInstance di = encode_direct(negate_and_dualize(s.formula, 2), vars, 6);
  fix_tree(di.cs, di.tree, t);
  CHECK_FALSE(sat(di.cs));
}

TEST_CASE("non-reactive trees are excluded") {
  const ProgramVars vars = make_program_vars(in_out(), 2);
  for (const char* text : {"while (tt) { skip }", "InOut; InOut", "while (in) { InOut }", "{ InOut; skip }"}) {
    const ProgramTree t = parse_program(text, in_out());
    DirectInstance di = encode_direct(negate_and_dualize(ltl_true(), 2), vars, t.size());
    fix_tree(di.cs, di.tree, t);
    CHECK_MESSAGE(!sat(di.cs), text);
    TwoWayInstance tw = encode_twoway(build_specification_automaton(ltl_true(), vars, IoMode::InOut), t.size());
    fix_tree(tw.cs, tw.tree, t);
    CHECK_MESSAGE(!sat(tw.cs), text);
  }
}

TEST_CASE("echo specification needs six nodes") {
  const SpecFile s = load_spec(kBench + "in_out.spec");
  const ProgramVars vars = make_program_vars(s.alphabet, 2);
  for (int n = 1; n <= 6; ++n) {
    CHECK_MESSAGE(twoway_sat(s.formula, vars, IoMode::InOut, n) == (n == 6), n);
    CHECK_MESSAGE(direct_sat(s.formula, vars, n) == (n == 6), n);
  }
  // With separate input and output statements five nodes suffice:
  // while (tt) { input in; output out }.
  CHECK_FALSE(twoway_sat(s.formula, vars, IoMode::Split, 4));
  CHECK(twoway_sat(s.formula, vars, IoMode::Split, 5));
}

TEST_CASE("trivial and contradictory specifications") {
  const ProgramVars vars = make_program_vars(in_out(), 2);
  // Smallest reactive programs per enumeration: while (tt) { InOut }.
  const auto behaviours = oracle::reactive_behaviours(vars, IoMode::InOut, 4);
  CHECK(oracle::min_realizing_size(behaviours, ltl_true(), 2) == 3);
  SynthesisOptions o;
  o.max_nodes = 6;
  for (EncodingKind e : {EncodingKind::TwoWay, EncodingKind::Direct}) {
    o.encoding = e;
    const SynthesisResult r = synthesize(ltl_true(), vars, o);
    REQUIRE(r.status == SynthesisStatus::Realizable);
    CHECK(r.program->size() == 3);
    CHECK(r.steps.size() == 3);
    const Ltl contra = parse_ltl("G out & G !out", in_out());
    const SynthesisResult u = synthesize(contra, vars, o);
    CHECK(u.status == SynthesisStatus::Unrealizable);
    CHECK(u.steps.size() == 6);
    for (const auto& st : u.steps) CHECK(st.status == SolveStatus::Unsat);
  }
}

TEST_CASE("verdicts match exhaustive enumeration on small trees") {
  const ProgramVars vars = make_program_vars(in_out(), 2);
  const auto inout = oracle::reactive_behaviours(vars, IoMode::InOut, 5);
  const auto split = oracle::reactive_behaviours(vars, IoMode::Split, 5);
  std::mt19937 rng(11);
  int realizable = 0;
  for (int k = 0; k < 8; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    const int m = oracle::min_realizing_size(inout, f, 2);
    const int ms = oracle::min_realizing_size(split, f, 2);
    realizable += m > 0;
    for (int n = 1; n <= 5; ++n) {
      const bool expected = m > 0 && m <= n;
      CHECK_MESSAGE(twoway_sat(f, vars, IoMode::InOut, n) == expected, "n=" << n << " f=" << to_string(f, in_out()));
      CHECK_MESSAGE(direct_sat(f, vars, n) == expected, "n=" << n << " f=" << to_string(f, in_out()));
      CHECK_MESSAGE(twoway_sat(f, vars, IoMode::Split, n) == (ms > 0 && ms <= n), "split n=" << n);
    }
  }
  CHECK(realizable > 0);
}

TEST_CASE("decoded programs and structures are consistent") {
  const ProgramVars vars = make_program_vars(in_out(), 3);
  std::mt19937 rng(3);
  int checked = 0;
  for (int k = 0; k < 12; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    const WordAutomaton ucb = negate_and_dualize(f, 2);
    for (int n = 3; n <= 7; ++n) {
      const DirectInstance inst = encode_direct(ucb, vars, n);
      const SolveResult r = solve(inst.cs, SolverOptions{});
      if (r.status != SolveStatus::Sat) continue;
      const ProgramTree t = decode_direct(inst, r.model);
      CHECK(validate_program_tree(t).ok());
      CHECK(t.size() <= n);
      CHECK(verify_program(t, f).pass);
      // The structure asserted by the model is the program's behaviour.
      const ExtractedStructure st = decode_structure(inst, r.model);
      const MealyMachine sm = st.to_mealy();
      for (int s = 0; s < st.num_states(); ++s)
        for (const int nx : st.next[static_cast<std::size_t>(s)]) CHECK(nx < st.num_states());
      oracle::for_each_lasso(2, 6, [&](const std::vector<Letter>& stem, const std::vector<Letter>& loop) {
        std::vector<std::uint32_t> word(stem.begin(), stem.end());
        word.insert(word.end(), loop.begin(), loop.end());
        CHECK(sm.run(word) == run_program(t, word));
      });
      ++checked;
      break;
    }
  }
  CHECK(checked > 3);
}

TEST_CASE("encodings agree with each other and grow monotonically") {
  const ProgramVars vars = make_program_vars(in_out(), 2);
  std::mt19937 rng(19);
  for (int k = 0; k < 8; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    bool prev_tw = false, prev_di = false;
    for (int n = 3; n <= 6; ++n) {
      const bool tw = twoway_sat(f, vars, IoMode::InOut, n);
      const bool di = direct_sat(f, vars, n);
      CHECK(tw == di);
      CHECK((!prev_tw || tw));
      CHECK((!prev_di || di));
      prev_tw = tw;
      prev_di = di;
    }
  }
}

TEST_CASE("instances dump as DIMACS with a name map") {
  const ProgramVars vars = make_program_vars(in_out(), 2);
  const TwoWayInstance inst = encode_twoway(build_specification_automaton(ltl_true(), vars, IoMode::InOut), 3);
  std::ostringstream cnf, names;
  inst.cs.write_dimacs(cnf);
  inst.cs.write_name_map(names);
  CHECK(cnf.str().rfind("p cnf ", 0) == 0);
  CHECK(names.str().find("tau[0]=while") != std::string::npos);
  CHECK(names.str().find("reach[") != std::string::npos);
  CHECK_THROWS(encode_direct(negate_and_dualize(ltl_true(), 2), vars, 3, 0));
  CHECK_THROWS(encode_twoway(build_specification_automaton(ltl_true(), vars, IoMode::InOut), 0));
}
