#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reactsyn/cnf.hpp"
#include "reactsyn/program.hpp"
#include "reactsyn/solver.hpp"
#include "reactsyn/two_way_automaton.hpp"
#include "reactsyn/verify.hpp"
#include "reactsyn/word_automaton.hpp"

namespace reactsyn {

/// Node reached by a move, together with the structure literals that must
/// hold for the move to land there.
struct Placement {
  std::vector<Lit> guard;
  int node;
  Dir dir;
};

/// Program-tree guessing over a flat node space 0..n-1 with node 0 the root.
/// The left child of t is always t+1 (pre-order numbering); the right child
/// is chosen among t+2..n-1. Nodes past the used prefix are padding.
class TreeEncoding {
 public:
  TreeEncoding(ConstraintSystem& cs, const ProgramVars& vars, std::vector<Label> alphabet, int num_nodes);

  int num_nodes() const { return num_nodes_; }
  const ProgramVars& vars() const { return vars_; }
  const std::vector<Label>& alphabet() const { return alphabet_; }
  int num_labels() const { return static_cast<int>(alphabet_.size()); }
  int label_index(const Label& l) const;

  /// 0 when the label cannot appear at t.
  Lit label(int t, int sigma) const { return label_[static_cast<std::size_t>(t)][static_cast<std::size_t>(sigma)]; }
  Lit has_left(int t) const { return has_left_[static_cast<std::size_t>(t)]; }
  /// 0 when u cannot be the right child of t.
  Lit right_child(int t, int u) const;
  Lit used(int t) const { return used_[static_cast<std::size_t>(t)]; }

  /// Where a move from node t may land. Empty for U at the root.
  std::vector<Placement> targets(int t, Move move) const;

  /// Reads the tree from a model; padding nodes are dropped and the result
  /// is renumbered in pre-order.
  ProgramTree decode(const Model& m) const;
  /// The raw tree on the full node space (children as in the model).
  ProgramTree decode_raw(const Model& m) const;

 private:
  int num_nodes_;
  ProgramVars vars_;
  std::vector<Label> alphabet_;
  std::vector<std::vector<Lit>> label_;
  std::vector<Lit> has_left_;
  std::vector<Lit> has_right_;
  std::vector<Lit> used_;
  std::vector<std::vector<Lit>> right_;
};

// -- two-way encoding -------------------------------------------------------

struct TwoWayInstance {
  ConstraintSystem cs;
  TreeEncoding tree;
  std::uint64_t bound = 0;
  int automaton_states = 0;
  int reachable_states = 0;
};

/// Guesses a program tree of at most `nodes` nodes together with the
/// reachability bits and bounded Streett annotations of its run graph
/// with `automaton`. `bound` defaults to reachable states * nodes * 3.
TwoWayInstance encode_twoway(const TwoWayAutomaton& automaton, int nodes,
                             std::optional<std::uint64_t> bound = std::nullopt);
ProgramTree decode_twoway(const TwoWayInstance& inst, const Model& m);

// -- direct encoding --------------------------------------------------------

/// Program configurations at InOut points and the input-labelled moves
/// between them. Outputs belong to states; the output produced for an
/// input is the output of the state the edge leads to.
struct ExtractedStructure {
  struct State {
    int node;
    std::uint32_t values;  // non-input variables
    std::uint32_t output;
  };
  int num_inputs = 0;
  int initial = 0;
  std::vector<State> states;
  /// next[state][input]
  std::vector<std::vector<int>> next;

  int num_states() const { return static_cast<int>(states.size()); }
  MealyMachine to_mealy() const;
};

void write_structure(const ExtractedStructure& s, std::ostream& out);

struct DirectInstance {
  ConstraintSystem cs;
  TreeEncoding tree;
  int num_valuations = 0;
  int structure_capacity = 0;
  int spec_states = 0;
  // Shortcut target of every InOut valuation, per input; and the shortcut
  // of the initial valuation.
  std::vector<std::vector<BitVec>> shortcut{};  // [structure state][input]
  BitVec initial_shortcut{};
  std::vector<Lit> structure_reach{};
  int value_bits = 0;  // number of non-input variables
};

/// `ucb` is the universal co-Buechi automaton of the specification.
DirectInstance encode_direct(const WordAutomaton& ucb, const ProgramVars& vars, int nodes,
                             std::optional<int> structure_bound = std::nullopt);
ProgramTree decode_direct(const DirectInstance& inst, const Model& m);
ExtractedStructure decode_structure(const DirectInstance& inst, const Model& m);

// -- synthesis driver -------------------------------------------------------

enum class EncodingKind { TwoWay, Direct };

const char* to_string(EncodingKind e);

struct SynthesisOptions {
  EncodingKind encoding = EncodingKind::Direct;
  IoMode io = IoMode::InOut;
  int min_nodes = 1;
  int max_nodes = 10;
  std::optional<std::uint64_t> bound;
  std::optional<int> structure_bound;
  SolverOptions solver;
  /// Keep going after a solver timeout (the sizes below stay undecided).
  bool continue_on_timeout = false;
  /// When set, each instance is written to <prefix>.<nodes>.cnf with a
  /// .map sidecar.
  std::string dump_prefix;
};

struct StepReport {
  int nodes = 0;
  std::uint64_t bound = 0;
  int num_vars = 0;
  std::size_t num_clauses = 0;
  SolveStatus status = SolveStatus::Unsat;
  double encode_seconds = 0;
  double solve_seconds = 0;
};

enum class SynthesisStatus { Realizable, Unrealizable, Timeout };

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::Unrealizable;
  std::optional<ProgramTree> program;
  std::optional<ExtractedStructure> structure;
  std::optional<VerifyResult> verification;
  std::vector<StepReport> steps;
  /// Size of the two-way Streett automaton (full and reachable part).
  int automaton_states = 0;
  int automaton_reachable = 0;
  double seconds = 0;
};

/// Smallest-first search over node budgets min_nodes..max_nodes. The first
/// satisfiable budget yields the program, which is then model checked.
SynthesisResult synthesize(const Ltl& spec, const ProgramVars& vars, const SynthesisOptions& options);
SynthesisResult synthesize_twoway(const Ltl& spec, const ProgramVars& vars, SynthesisOptions options);
SynthesisResult synthesize_direct(const Ltl& spec, const ProgramVars& vars, SynthesisOptions options);

}  // namespace reactsyn
