#pragma once

#include <string>
#include <vector>

#include "reactsyn/ltl.hpp"
#include "reactsyn/program.hpp"

namespace reactsyn {

struct Counterexample {
  std::vector<IoStep> stem;
  std::vector<IoStep> loop;
};

struct VerifyResult {
  bool pass = false;
  /// Verdict of the SCC analysis of the run graph.
  bool scc_pass = false;
  /// Verdict of annotation construction plus validity check.
  bool annotation_pass = false;
  int mealy_states = 0;
  int run_graph_vertices = 0;
  /// Present when the program fails.
  std::optional<Counterexample> counterexample;
};

/// Model checks a program against an LTL formula via its Mealy machine and
/// the universal co-Buechi automaton of the formula. Throws
/// NonReactiveError for programs that are not reactive; throws Error if the
/// two decision procedures disagree.
VerifyResult verify_program(const ProgramTree& tree, const Ltl& formula);

/// Renders "in/out" steps using the alphabet's atom names.
std::string format_trace(const std::vector<IoStep>& steps, const AlphabetSpec& alphabet);

}  // namespace reactsyn
