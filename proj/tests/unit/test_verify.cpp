#include <doctest.h>

#include <random>

#include "common/ltl_oracle.hpp"
#include "reactsyn/verify.hpp"

using namespace reactsyn;

namespace {

const std::string kBench = REACTSYN_SOURCE_DIR "/benchmarks/";

SpecFile spec(const std::string& name) { return load_spec(kBench + name + ".spec"); }

ProgramTree program(const std::string& name, const AlphabetSpec& a) {
  return load_program(kBench + "programs/" + name + ".prog", a);
}

// Letters of a trace in the automaton alphabet.
std::vector<Letter> letters(const std::vector<IoStep>& steps, int num_inputs) {
  std::vector<Letter> out;
  for (const auto& s : steps) out.push_back(s.input | (s.output << num_inputs));
  return out;
}

// Output lasso a Mealy machine produces on the input lasso stem.loop^w.
std::pair<std::vector<Letter>, std::vector<Letter>> program_lasso(const MealyMachine& m, const std::vector<Letter>& stem,
                                                                  const std::vector<Letter>& loop) {
  std::vector<Letter> out_stem;
  int state = m.initial;
  auto step = [&](Letter in, std::vector<Letter>& sink) {
    sink.push_back(in | (m.out[static_cast<std::size_t>(state)][in] << m.num_inputs));
    state = m.next[static_cast<std::size_t>(state)][in];
  };
  for (Letter in : stem) step(in, out_stem);
  // Unroll the loop until the machine state repeats at a loop boundary.
  std::vector<int> first_seen(static_cast<std::size_t>(m.num_states()), -1);
  std::vector<Letter> unrolled;
  for (int round = 0; first_seen[static_cast<std::size_t>(state)] < 0; ++round) {
    first_seen[static_cast<std::size_t>(state)] = round;
    for (Letter in : loop) step(in, unrolled);
  }
  const auto split = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(first_seen[static_cast<std::size_t>(state)]) *
                                                 loop.size());
  out_stem.insert(out_stem.end(), unrolled.begin(), unrolled.begin() + split);
  return {out_stem, std::vector<Letter>(unrolled.begin() + split, unrolled.end())};
}

}  // namespace

TEST_CASE("reference programs satisfy their specifications") {
  for (const char* name : {"in_out", "in_next_out", "latch", "arbiter"}) {
    const SpecFile s = spec(name);
    const ProgramTree t = program(name, s.alphabet);
    const VerifyResult r = verify_program(t, s.formula);
    CHECK_MESSAGE(r.pass, name);
    CHECK(r.scc_pass == r.annotation_pass);
    CHECK_FALSE(r.counterexample.has_value());
  }
}

TEST_CASE("arbiter program satisfies mutual exclusion alone") {
  const SpecFile s = spec("mutex");
  CHECK(verify_program(program("arbiter", s.alphabet), s.formula).pass);
}

TEST_CASE("counterexamples are genuine") {
  struct Case {
    const char* prog;
    const char* spec;
  };
  for (const Case c : {Case{"in_out", "in_next_out"}, Case{"in_next_out", "in_out"}, Case{"latch", "latch"}}) {
    const SpecFile s = spec(c.spec);
    ProgramTree t;
    if (std::string(c.prog) == "latch") {
      // Latch without the update guard.
      t = parse_program("while (tt) { out = in; InOut }", s.alphabet);
    } else {
      t = program(c.prog, s.alphabet);
    }
    const VerifyResult r = verify_program(t, s.formula);
    CHECK_FALSE(r.pass);
    REQUIRE(r.counterexample.has_value());
    const auto& cx = *r.counterexample;
    REQUIRE_FALSE(cx.loop.empty());
    // The lasso is a program behaviour: replay it through the interpreter.
    std::vector<std::uint32_t> inputs;
    std::vector<IoStep> expected = cx.stem;
    for (int rep = 0; rep < 3; ++rep) expected.insert(expected.end(), cx.loop.begin(), cx.loop.end());
    for (const auto& st : expected) inputs.push_back(st.input);
    const auto trace = run_program(t, inputs);
    CHECK(trace == expected);
    // And it violates the formula according to the direct LTL evaluator.
    const int ni = s.alphabet.num_inputs();
    CHECK_FALSE(oracle::holds(s.formula, letters(cx.stem, ni), letters(cx.loop, ni)));
  }
}

TEST_CASE("verification matches lasso enumeration on random specifications") {
  AlphabetSpec a;
  a.inputs = {"in"};
  a.outputs = {"out"};
  const std::vector<std::string> programs{
      "while(tt) { out = in; InOut }",          "while(tt) { out = not out; InOut }",
      "while(tt) { InOut }",                    "while(tt) { out = var; var = in; InOut }",
      "while(tt) { out = tt; InOut }",          "while(tt) { out = in or out; InOut }",
  };
  std::mt19937 rng(5);
  int passes = 0, failures = 0;
  for (int k = 0; k < 60; ++k) {
    const Ltl f = oracle::random_formula(rng, 2, 3);
    for (const auto& text : programs) {
      const ProgramTree t = parse_program(text, a);
      const MealyMachine m = minimize_mealy(extract_mealy(t));
      bool holds = true;
      oracle::for_each_lasso(2, 5, [&](const auto& stem, const auto& loop) {
        if (!holds) return;
        const auto [s, l] = program_lasso(m, stem, loop);
        holds = oracle::holds(f, s, l);
      });
      const VerifyResult r = verify_program(t, f);
      if (r.pass) {
        CHECK(holds);
        ++passes;
      } else {
        CHECK_FALSE(oracle::holds(f, letters(r.counterexample->stem, 1), letters(r.counterexample->loop, 1)));
        ++failures;
      }
    }
  }
  CHECK(passes > 20);
  CHECK(failures > 20);
}

TEST_CASE("non-reactive programs are reported, not judged") {
  AlphabetSpec a;
  a.inputs = {"in"};
  a.outputs = {"out"};
  CHECK_THROWS_AS(verify_program(parse_program("while (tt) { skip }", a), ltl_true()), NonReactiveError);
}

TEST_CASE("trace formatting") {
  AlphabetSpec a;
  a.inputs = {"in"};
  a.outputs = {"out"};
  CHECK(format_trace({{1, 0}, {0, 1}}, a) == "{in / !out} {!in / out}");
}
