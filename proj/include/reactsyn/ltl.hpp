#pragma once

#include <memory>
#include <string>
#include <vector>

namespace reactsyn {

/// Declared input and output propositions. Letters are bitmasks with
/// input j at bit j and output k at bit num_inputs() + k.
struct AlphabetSpec {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  int num_inputs() const { return static_cast<int>(inputs.size()); }
  int num_outputs() const { return static_cast<int>(outputs.size()); }
  int num_atoms() const { return num_inputs() + num_outputs(); }
  /// Bit index of a proposition, or -1.
  int atom_index(const std::string& name) const;
  const std::string& atom_name(int index) const;
  /// Throws unless names are unique and both lists are non-empty.
  void validate() const;
};

enum class LtlOp {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  Until,
  Release,  // internal only, produced by negation normal form
  Eventually,
  Always,
};

struct LtlNode;
using Ltl = std::shared_ptr<const LtlNode>;

struct LtlNode {
  LtlOp op;
  int atom = -1;
  Ltl lhs;
  Ltl rhs;
};

Ltl ltl_true();
Ltl ltl_false();
Ltl ltl_atom(int index);
Ltl ltl_unary(LtlOp op, Ltl arg);
Ltl ltl_binary(LtlOp op, Ltl lhs, Ltl rhs);

/// Number of operators on the longest root-to-leaf path (atoms have depth 0).
int ltl_depth(const Ltl& f);

/// Structural equality.
bool ltl_equal(const Ltl& a, const Ltl& b);

/// Rewrites into negation normal form over True, False, Atom, Not(Atom),
/// And, Or, Next, Until and Release.
Ltl to_nnf(const Ltl& f);

std::string to_string(const Ltl& f, const AlphabetSpec& alphabet);

struct SpecFile {
  AlphabetSpec alphabet;
  Ltl formula;
};

/// Parses `inputs: a, b;` `outputs: c;` `spec: <LTL>;` (several spec lines
/// are conjoined). Comments start with `#` or `//`.
SpecFile parse_spec(const std::string& text);
SpecFile load_spec(const std::string& path);

/// Parses a bare formula over an already declared alphabet.
Ltl parse_ltl(const std::string& text, const AlphabetSpec& alphabet);

}  // namespace reactsyn
