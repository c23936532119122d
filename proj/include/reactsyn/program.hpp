#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reactsyn/error.hpp"
#include "reactsyn/ltl.hpp"

namespace reactsyn {

enum class LabelKind : std::uint8_t {
  Not,
  Or,
  Seq,
  If,
  Then,
  While,
  Skip,
  True,
  False,
  Var,
  Assign,
  Input,
  Output,
  InOut,
};

/// A program-tree label. `var` is set for Var and Assign, `vars` for
/// Input and Output. InOut reads into the designated input variables and
/// writes the designated output variables.
struct Label {
  LabelKind kind = LabelKind::Skip;
  int var = -1;
  std::vector<int> vars;

  bool operator==(const Label&) const = default;
  auto operator<=>(const Label&) const = default;
};

enum class SyntaxClass { Stmt, Expr, Then };
enum class Side { Left, Right };

/// Number of children a node with this label has (0, 1 or 2).
int label_arity(LabelKind kind);
SyntaxClass label_class(LabelKind kind);
/// Class required of the child on `side`, or nullopt if there is no child.
std::optional<SyntaxClass> child_class(LabelKind kind, Side side);
bool is_io(LabelKind kind);

/// Variable layout: the first num_inputs variables are the designated
/// inputs, the next num_outputs the designated outputs.
struct ProgramVars {
  int num_inputs = 0;
  int num_outputs = 0;
  std::vector<std::string> names;

  int num_vars() const { return static_cast<int>(names.size()); }
  int index_of(const std::string& name) const;
  bool is_input(int v) const { return v < num_inputs; }
};

/// Spec inputs, spec outputs, then additional variables var0, var1, ...
ProgramVars make_program_vars(const AlphabetSpec& alphabet, int total_vars);

enum class IoMode { Split, InOut };

/// Labels available to synthesis. In InOut mode assignments to the
/// designated inputs are excluded.
std::vector<Label> program_alphabet(const ProgramVars& vars, IoMode mode);

std::string label_to_string(const Label& label, const ProgramVars& vars);

/// Binary tree with node 0 as the root; -1 marks a missing child.
struct ProgramTree {
  struct Node {
    Label label;
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;
  ProgramVars vars;

  int size() const { return static_cast<int>(nodes.size()); }
  const Node& at(int n) const { return nodes[static_cast<std::size_t>(n)]; }
  /// Parent of every node (-1 for the root and for orphans).
  std::vector<int> parents() const;
  /// {L,R}* address of every node ("" for the root).
  std::vector<std::string> paths() const;
  bool uses_inout() const;
  /// Variables referenced anywhere (designated I/O variables included).
  std::vector<bool> referenced_vars() const;
  /// Number of referenced variables that are neither designated inputs
  /// nor designated outputs.
  int additional_vars() const;
};

/// Renumbers reachable nodes in pre-order (root, left subtree, right
/// subtree) and drops unreachable ones.
ProgramTree canonicalize(const ProgramTree& tree);

/// Same labels and shape, ignoring node numbering.
bool same_tree(const ProgramTree& a, const ProgramTree& b);

struct ValidationReport {
  std::vector<std::string> violations;
  /// Input and output statements alternate along every control path.
  bool io_alternates = true;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_program_tree(const ProgramTree& tree);

/// Evaluates the expression rooted at `node` under valuation bitmask `s`.
bool eval_bool_expr(const ProgramTree& tree, int node, std::uint64_t s);

/// Renders in the concrete program syntax accepted by parse_program.
std::string print_program(const ProgramTree& tree);
/// Parses concrete syntax. Identifiers equal to the spec inputs and outputs
/// become the designated variables; others are appended in order of
/// first occurrence.
ProgramTree parse_program(const std::string& text, const AlphabetSpec& alphabet);
ProgramTree load_program(const std::string& path, const AlphabetSpec& alphabet);

/// JSON list of {"path", "label"} objects.
std::string program_to_json(const ProgramTree& tree);

/// Raised when a program terminates, diverges between I/O events or does
/// not alternate input and output.
class NonReactiveError : public Error {
 public:
  using Error::Error;
};

struct IoStep {
  std::uint32_t input = 0;
  std::uint32_t output = 0;
  bool operator==(const IoStep&) const = default;
};

/// Runs the program on `inputs`; returns one IoStep per consumed input.
/// Throws NonReactiveError when more than `step_budget` internal steps pass
/// without I/O, or the program terminates or breaks alternation.
std::vector<IoStep> run_program(const ProgramTree& tree, const std::vector<std::uint32_t>& inputs,
                                std::uint64_t step_budget = 100000);

struct MealyMachine {
  int num_inputs = 0;
  int num_outputs = 0;
  int initial = 0;
  /// next[m][in], out[m][in]
  std::vector<std::vector<int>> next;
  std::vector<std::vector<std::uint32_t>> out;

  int num_states() const { return static_cast<int>(next.size()); }
  std::vector<IoStep> run(const std::vector<std::uint32_t>& inputs) const;
};

/// Explores all interpreter configurations at input points.
MealyMachine extract_mealy(const ProgramTree& tree, std::size_t config_budget = 100000,
                           std::uint64_t step_budget = 100000);

/// Merges trace-equivalent states.
MealyMachine minimize_mealy(const MealyMachine& m);

/// Runs both programs through the interpreter on every input word of
/// length `length` (and hence on all shorter prefixes) and compares the
/// traces. Both programs must use the same input arity.
bool traces_equal(const ProgramTree& a, const ProgramTree& b, int length);

}  // namespace reactsyn
