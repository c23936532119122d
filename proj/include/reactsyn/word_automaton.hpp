#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reactsyn/ltl.hpp"

namespace reactsyn {

using Letter = std::uint32_t;

enum class WordAcceptance { Buchi, CoBuchi };

/// Explicit word automaton over letters 0 .. 2^num_atoms - 1.
///
/// Buchi: nondeterministic, accepts if some run visits `marked` infinitely
/// often. CoBuchi: universal, accepts if no run visits `marked`
/// infinitely often.
struct WordAutomaton {
  int num_atoms = 0;
  int initial = 0;
  WordAcceptance acceptance = WordAcceptance::Buchi;
  std::vector<bool> marked;
  /// delta[state][letter] = successor states (possibly empty).
  std::vector<std::vector<std::vector<int>>> delta;

  int num_states() const { return static_cast<int>(delta.size()); }
  Letter num_letters() const { return Letter{1} << num_atoms; }
  const std::vector<int>& successors(int state, Letter letter) const {
    return delta[static_cast<std::size_t>(state)][letter];
  }
  /// Throws if the shape is inconsistent.
  void validate() const;
};

/// Nondeterministic Buchi automaton for `f` via a tableau construction,
/// degeneralization, pruning of states without accepting continuations
/// and a bisimulation quotient.
WordAutomaton ltl_to_nba(const Ltl& f, int num_atoms);

/// ltl_to_nba(!f) read as a universal co-Buchi automaton for f.
WordAutomaton negate_and_dualize(const Ltl& f, int num_atoms);

/// Adds an unmarked sink absorbing every missing transition, so that every
/// state has a successor on every letter. Languages are unchanged.
WordAutomaton complete_automaton(const WordAutomaton& a);

/// Acceptance of the ultimately periodic word stem . loop^omega.
bool accepts_lasso(const WordAutomaton& a, const std::vector<Letter>& stem, const std::vector<Letter>& loop);

/// Text format:
///   states: N
///   initial: Q
///   acceptance: buchi | cobuchi
///   accepting: q1 q2 ...
///   atoms: K
///   <src> <letter> <dst>    (one transition per line)
void write_automaton(const WordAutomaton& a, std::ostream& out);
WordAutomaton read_automaton(std::istream& in);

}  // namespace reactsyn
