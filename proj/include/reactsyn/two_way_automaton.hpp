#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "reactsyn/program.hpp"
#include "reactsyn/word_automaton.hpp"

namespace reactsyn {

/// Direction from which a node was entered: from its parent (D) or
/// returning from its left or right child.
enum class Dir : std::uint8_t { D, L, R };
/// Move requested by a transition. RL and RR descend through the right
/// child (a `then` node) to its left or right child in one step.
enum class Move : std::uint8_t { L, R, U, RL, RR };

const char* to_string(Dir d);
const char* to_string(Move m);

/// Moves along a {L,R}* node address. Walking up from the root throws.
std::pair<std::string, Dir> mu_step(const std::string& node, Move move);

/// Execution states carry the Buechi flag t in `flag`; expression states
/// carry the evaluation result r.
struct TwoWayState {
  bool expr = false;
  bool flag = false;
  bool m_out = false;  // an output (or InOut output) is due next
  std::uint32_t s = 0;
  int q = 0;
  std::uint32_t i = 0;

  bool operator==(const TwoWayState&) const = default;
};

struct TwoWayTransition {
  int state;
  Move move;
  bool operator==(const TwoWayTransition&) const = default;
};

enum class TreeAcceptance { Buchi, CoBuchi, Streett };

/// Streett pair over automaton states: visiting `a` infinitely often
/// requires visiting `g` infinitely often.
struct StreettPair {
  std::vector<bool> a;
  std::vector<bool> g;
};

/// The program-simulating two-way automaton. Transitions are computed on
/// demand from the rule table; the object itself is immutable.
class TwoWayAutomaton {
 public:
  TwoWayAutomaton(ProgramVars vars, IoMode mode, WordAutomaton spec);

  const ProgramVars& vars() const { return vars_; }
  IoMode mode() const { return mode_; }
  /// Buechi automaton for the negated specification.
  const WordAutomaton& spec() const { return spec_; }
  const std::vector<Label>& alphabet() const { return alphabet_; }

  int num_states() const { return num_states_; }
  int num_exec_states() const { return num_states_ / 2; }
  int initial() const { return index(TwoWayState{}); }
  int index(const TwoWayState& st) const;
  TwoWayState state(int p) const;
  std::string state_to_string(int p) const;

  std::vector<TwoWayTransition> delta(int p, const Label& label, Dir d) const;

  /// States reachable from the initial one under any labels and directions.
  std::vector<int> reachable_states() const;

  TreeAcceptance acceptance = TreeAcceptance::Buchi;
  /// F for Buechi and co-Buechi acceptance.
  std::vector<bool> accepting;
  /// Pairs for Streett acceptance.
  std::vector<StreettPair> pairs;

 private:
  ProgramVars vars_;
  IoMode mode_;
  WordAutomaton spec_;
  std::vector<Label> alphabet_;
  int num_states_ = 0;
  std::uint32_t num_vals_ = 0;
  std::uint32_t num_inputs_vals_ = 0;

  Letter letter(std::uint32_t i, std::uint32_t s, const std::vector<int>& out_vars) const;
};

/// Buechi automaton accepting the program trees that violate the
/// specification whose negation `negated_spec` recognizes.
TwoWayAutomaton build_b(const WordAutomaton& negated_spec, const ProgramVars& vars, IoMode mode);
/// Same transitions read universally with co-Buechi acceptance.
TwoWayAutomaton complement_to_ucb(const TwoWayAutomaton& b);
/// Adds the reactiveness pair: infinitely many outputs on every path.
TwoWayAutomaton build_streett_product(const TwoWayAutomaton& ucb);

/// Convenience: the Streett automaton for `f` over `vars`.
TwoWayAutomaton build_specification_automaton(const Ltl& f, const ProgramVars& vars, IoMode mode);

/// Text dump "state label dir -> state move" for the given states.
void write_transition_table(const TwoWayAutomaton& a, const std::vector<int>& states, std::ostream& out);

/// Result of driving the automaton along a program tree deterministically.
struct Simulation {
  /// One entry per output event.
  std::vector<IoStep> steps;
  /// The walk got stuck (no transition or a move off the tree).
  bool stuck = false;
};

/// Walks the automaton over `tree`, resolving input nondeterminism with
/// `inputs` and specification nondeterminism by taking the first successor.
/// Stops after all inputs were consumed and the matching outputs produced,
/// or after `step_budget` moves.
Simulation simulate(const TwoWayAutomaton& a, const ProgramTree& tree, const std::vector<std::uint32_t>& inputs,
                    std::uint64_t step_budget = 100000);

/// Enters the expression at `node` with valuation `s` and r = false, and
/// follows the automaton until it leaves the subtree upward. Returns the
/// result flag, or nullopt if the walk gets stuck.
std::optional<bool> evaluate_with_automaton(const TwoWayAutomaton& a, const ProgramTree& tree, int node,
                                            std::uint32_t s);

}  // namespace reactsyn
