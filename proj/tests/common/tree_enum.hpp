#pragma once

// Exhaustive enumeration of syntactically valid program trees, used as an
// oracle for the synthesis encodings.

#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "reactsyn/program.hpp"
#include "reactsyn/run_graph.hpp"
#include "reactsyn/word_automaton.hpp"

namespace oracle {

using reactsyn::Label;
using reactsyn::LabelKind;
using reactsyn::ProgramTree;
using reactsyn::SyntaxClass;

struct Shape {
  Label label;
  std::shared_ptr<const Shape> left, right;
};
using ShapePtr = std::shared_ptr<const Shape>;

// All subtrees of exactly `size` nodes whose root has class `cls`.
class TreeEnumerator {
 public:
  explicit TreeEnumerator(std::vector<Label> alphabet) : alphabet_(std::move(alphabet)) {}

  const std::vector<ShapePtr>& trees(SyntaxClass cls, int size) {
    const auto key = std::make_pair(static_cast<int>(cls), size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<ShapePtr> out;
    for (const Label& l : alphabet_) {
      if (reactsyn::label_class(l.kind) != cls) continue;
      const int arity = reactsyn::label_arity(l.kind);
      if (arity == 0 && size == 1) out.push_back(std::make_shared<Shape>(Shape{l, nullptr, nullptr}));
      if (arity == 1 && size >= 2) {
        for (const auto& a : trees(*reactsyn::child_class(l.kind, reactsyn::Side::Left), size - 1))
          out.push_back(std::make_shared<Shape>(Shape{l, a, nullptr}));
      }
      if (arity == 2) {
        for (int ls = 1; ls + 1 < size; ++ls) {
          const auto& lefts = trees(*reactsyn::child_class(l.kind, reactsyn::Side::Left), ls);
          const auto& rights = trees(*reactsyn::child_class(l.kind, reactsyn::Side::Right), size - 1 - ls);
          for (const auto& a : lefts)
            for (const auto& b : rights) out.push_back(std::make_shared<Shape>(Shape{l, a, b}));
        }
      }
    }
    return memo_[key] = std::move(out);
  }

 private:
  std::vector<Label> alphabet_;
  std::map<std::pair<int, int>, std::vector<ShapePtr>> memo_;
};

inline ProgramTree to_tree(const ShapePtr& s, const reactsyn::ProgramVars& vars) {
  ProgramTree t;
  t.vars = vars;
  std::function<int(const ShapePtr&)> add = [&](const ShapePtr& x) {
    const int id = t.size();
    t.nodes.push_back({x->label, -1, -1});
    if (x->left) {
      const int l = add(x->left);
      t.nodes[static_cast<std::size_t>(id)].left = l;
    }
    if (x->right) {
      const int r = add(x->right);
      t.nodes[static_cast<std::size_t>(id)].right = r;
    }
    return id;
  };
  add(s);
  return t;
}

inline std::string mealy_key(const reactsyn::MealyMachine& m) {
  std::ostringstream k;
  k << m.initial << ":";
  for (int s = 0; s < m.num_states(); ++s)
    for (std::size_t i = 0; i < m.next[static_cast<std::size_t>(s)].size(); ++i)
      k << m.next[static_cast<std::size_t>(s)][i] << "/" << m.out[static_cast<std::size_t>(s)][i] << ",";
  return k.str();
}

// Distinct behaviours of all reactive programs with at most `max_nodes`
// nodes, each with the smallest program size realizing it.
struct Behaviour {
  reactsyn::MealyMachine machine;
  int min_size;
  ProgramTree example;
};

inline std::vector<Behaviour> reactive_behaviours(const reactsyn::ProgramVars& vars, reactsyn::IoMode mode,
                                                  int max_nodes, int* programs_seen = nullptr) {
  TreeEnumerator en(reactsyn::program_alphabet(vars, mode));
  std::map<std::string, std::size_t> index;
  std::vector<Behaviour> out;
  int seen = 0;
  for (int size = 1; size <= max_nodes; ++size) {
    for (const auto& shape : en.trees(SyntaxClass::Stmt, size)) {
      ++seen;
      const ProgramTree t = to_tree(shape, vars);
      reactsyn::MealyMachine m;
      try {
        m = reactsyn::minimize_mealy(reactsyn::extract_mealy(t, 2000, 2000));
      } catch (const reactsyn::NonReactiveError&) {
        continue;
      }
      const std::string key = mealy_key(m);
      if (index.count(key) == 0) {
        index[key] = out.size();
        out.push_back({m, size, t});
      }
    }
  }
  if (programs_seen) *programs_seen = seen;
  return out;
}

// Smallest size of a program satisfying `f`, or -1.
inline int min_realizing_size(const std::vector<Behaviour>& behaviours, const reactsyn::Ltl& f, int num_atoms) {
  const reactsyn::WordAutomaton ucb = reactsyn::negate_and_dualize(f, num_atoms);
  int best = -1;
  for (const auto& b : behaviours) {
    if (best >= 0 && b.min_size >= best) continue;
    const auto g = reactsyn::run_graph_word_on_mealy(ucb, b.machine);
    if (reactsyn::graph_satisfies_acceptance(g, reactsyn::GraphCondition::co_buchi(ucb.marked))) best = b.min_size;
  }
  return best;
}

}  // namespace oracle
