#include <doctest.h>

#include <random>
#include <sstream>

#include "../common/ltl_oracle.hpp"
#include "reactsyn/error.hpp"
#include "reactsyn/ltl.hpp"
#include "reactsyn/word_automaton.hpp"

using namespace reactsyn;

namespace {

AlphabetSpec in_out() {
  AlphabetSpec a;
  a.inputs = {"in"};
  a.outputs = {"out"};
  return a;
}

// Counts lassos where the automaton verdict differs from the oracle.
int count_mismatches(const WordAutomaton& a, const Ltl& f, int max_len) {
  int bad = 0;
  oracle::for_each_lasso(a.num_letters(), max_len, [&](const auto& stem, const auto& loop) {
    if (accepts_lasso(a, stem, loop) != oracle::holds(f, stem, loop)) ++bad;
  });
  return bad;
}

}  // namespace

TEST_CASE("spec file parsing") {
  const SpecFile s = parse_spec("inputs: in;\noutputs: out;\nspec: in <-> out;\n");
  CHECK(s.alphabet.inputs == std::vector<std::string>{"in"});
  CHECK(s.alphabet.outputs == std::vector<std::string>{"out"});
  REQUIRE(s.formula->op == LtlOp::Iff);
  CHECK(s.formula->lhs->op == LtlOp::Atom);
  CHECK(s.formula->lhs->atom == 0);
  CHECK(s.formula->rhs->atom == 1);

  const SpecFile t = parse_spec("inputs: a; outputs: b; spec: tt;");
  CHECK(t.formula->op == LtlOp::True);

  const SpecFile x = parse_spec("# comment\ninputs: in; // trailing\noutputs: out;\nspec: in <-> X out;");
  REQUIRE(x.formula->op == LtlOp::Iff);
  CHECK(x.formula->rhs->op == LtlOp::Next);
  CHECK(x.formula->rhs->lhs->atom == 1);

  const SpecFile two = parse_spec("inputs: a; outputs: b; spec: G a; spec: F b;");
  CHECK(two.formula->op == LtlOp::And);
}

TEST_CASE("operator precedence") {
  const AlphabetSpec ab = [] {
    AlphabetSpec a;
    a.inputs = {"a", "b"};
    a.outputs = {"c"};
    return a;
  }();
  // unary > U > & > | > -> <->
  CHECK(to_string(parse_ltl("a | b & c", ab), ab) == "a | b & c");
  CHECK(parse_ltl("a | b & c", ab)->op == LtlOp::Or);
  CHECK(parse_ltl("a & b U c", ab)->op == LtlOp::And);
  CHECK(parse_ltl("a -> b | c", ab)->op == LtlOp::Implies);
  CHECK(parse_ltl("!a U b", ab)->op == LtlOp::Until);
  CHECK(parse_ltl("G a -> F b", ab)->op == LtlOp::Implies);
  CHECK(parse_ltl("X X a", ab)->lhs->op == LtlOp::Next);
  const Ltl f = parse_ltl("G(a -> F c) & !(b U c) | a <-> X b", ab);
  CHECK(ltl_equal(parse_ltl(to_string(f, ab), ab), f));
}

TEST_CASE("spec parse errors carry positions") {
  try {
    parse_spec("inputs: in;\noutputs: out;\nspec: in & & out;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 12);
  }
  CHECK_THROWS_AS(parse_spec("inputs: in; outputs: out; spec: foo;"), ParseError);
  CHECK_THROWS_AS(parse_spec("inputs: in, in; outputs: out; spec: tt;"), ParseError);
  CHECK_THROWS_AS(parse_spec("inputs: in; outputs: in; spec: tt;"), ParseError);
  CHECK_THROWS_AS(parse_spec("inputs: in; inputs: x; outputs: out; spec: tt;"), ParseError);
  CHECK_THROWS_AS(parse_spec("inputs: in; outputs: out; spec: in R out;"), ParseError);
  CHECK_THROWS_AS(parse_spec("inputs: in; outputs: out; spec: (in;"), ParseError);
  CHECK_THROWS_AS(parse_spec("inputs: in; outputs: out;"), ParseError);
  CHECK_THROWS_AS(parse_spec("inputs: in; outputs: out; spec: in"), ParseError);
}

TEST_CASE("negation normal form preserves semantics") {
  std::mt19937 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    const Ltl g = to_nnf(f);
    int bad = 0;
    oracle::for_each_lasso(4, 4, [&](const auto& stem, const auto& loop) {
      if (oracle::holds(f, stem, loop) != oracle::holds(g, stem, loop)) ++bad;
    });
    CHECK(bad == 0);
  }
}

TEST_CASE("G a matches the lasso oracle") {
  AlphabetSpec a;
  a.inputs = {"a"};
  a.outputs = {"b"};
  const Ltl f = ltl_unary(LtlOp::Always, ltl_atom(0));
  // One-bit alphabet: the output bit is never set.
  WordAutomaton nba = ltl_to_nba(f, 1);
  CHECK(count_mismatches(nba, f, 6) == 0);
}

TEST_CASE("ff has an empty language and tt a universal one") {
  const WordAutomaton empty = ltl_to_nba(ltl_false(), 2);
  int accepted = 0;
  oracle::for_each_lasso(4, 4, [&](const auto& s, const auto& l) { accepted += accepts_lasso(empty, s, l); });
  CHECK(accepted == 0);

  const WordAutomaton ucb = negate_and_dualize(ltl_true(), 2);
  int rejected = 0;
  oracle::for_each_lasso(4, 4, [&](const auto& s, const auto& l) { rejected += !accepts_lasso(ucb, s, l); });
  CHECK(rejected == 0);
}

TEST_CASE("negated and dualized G(in <-> out)") {
  const AlphabetSpec ab = in_out();
  const Ltl f = parse_ltl("G(in <-> out)", ab);
  const Ltl nf = ltl_unary(LtlOp::Not, f);
  CHECK(count_mismatches(ltl_to_nba(nf, 2), nf, 6) == 0);
  const WordAutomaton ucb = negate_and_dualize(f, 2);
  CHECK(count_mismatches(ucb, f, 6) == 0);
  CHECK(ucb.acceptance == WordAcceptance::CoBuchi);
}

TEST_CASE("dualization keeps states and transitions") {
  std::mt19937 rng(5);
  for (int k = 0; k < 40; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    const WordAutomaton a = negate_and_dualize(f, 2);
    const WordAutomaton b = ltl_to_nba(ltl_unary(LtlOp::Not, f), 2);
    CHECK(a.delta == b.delta);
    CHECK(a.marked == b.marked);
    CHECK(a.initial == b.initial);
  }
}

TEST_CASE("random formulas agree with the lasso oracle") {
  std::mt19937 rng(1234);
  for (int k = 0; k < 150; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    const WordAutomaton nba = ltl_to_nba(f, 2);
    nba.validate();
    CHECK(count_mismatches(nba, f, 5) == 0);
    const WordAutomaton ucb = negate_and_dualize(f, 2);
    CHECK(count_mismatches(ucb, f, 5) == 0);
  }
}

TEST_CASE("complement round trip on lassos") {
  std::mt19937 rng(99);
  for (int k = 0; k < 60; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    const WordAutomaton pos = ltl_to_nba(f, 2);
    const WordAutomaton neg = ltl_to_nba(ltl_unary(LtlOp::Not, f), 2);
    int bad = 0;
    oracle::for_each_lasso(4, 5, [&](const auto& s, const auto& l) {
      if (accepts_lasso(pos, s, l) == accepts_lasso(neg, s, l)) ++bad;
    });
    CHECK(bad == 0);
  }
}

TEST_CASE("automaton text format round trip") {
  const Ltl f = parse_ltl("G(in -> F out)", in_out());
  const WordAutomaton a = negate_and_dualize(f, 2);
  std::stringstream ss;
  write_automaton(a, ss);
  const WordAutomaton b = read_automaton(ss);
  CHECK(b.delta == a.delta);
  CHECK(b.marked == a.marked);
  CHECK(b.initial == a.initial);
  CHECK(b.acceptance == a.acceptance);

  std::stringstream bad("states: 2\ninitial: 0\nacceptance: buchi\natoms: 1\n0 0 5\n");
  CHECK_THROWS_AS(read_automaton(bad), ParseError);
}

TEST_CASE("automaton sizes for the benchmark specifications stay small") {
  const Ltl f = parse_ltl("G(in <-> out)", in_out());
  CHECK(negate_and_dualize(f, 2).num_states() <= 3);
  const Ltl g = parse_ltl("G(in <-> X out)", in_out());
  CHECK(negate_and_dualize(g, 2).num_states() <= 5);
}

TEST_CASE("completion adds a sink without changing the language") {
  std::mt19937 rng(8);
  for (int k = 0; k < 40; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    const WordAutomaton a = ltl_to_nba(f, 2);
    const WordAutomaton c = complete_automaton(a);
    CHECK(c.num_states() <= a.num_states() + 1);
    for (int q = 0; q < c.num_states(); ++q)
      for (Letter l = 0; l < c.num_letters(); ++l) CHECK_FALSE(c.successors(q, l).empty());
    int bad = 0;
    oracle::for_each_lasso(4, 4, [&](const auto& s, const auto& l) { bad += accepts_lasso(a, s, l) != accepts_lasso(c, s, l); });
    CHECK(bad == 0);
  }
}
