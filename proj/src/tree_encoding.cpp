#include <algorithm>
#include <string>

#include "reactsyn/encoding.hpp"
#include "reactsyn/error.hpp"

namespace reactsyn {

namespace {

bool fits(LabelKind kind, int t, int n) {
  switch (label_arity(kind)) {
    case 0: return true;
    case 1: return t + 1 < n;
    default: return t + 2 < n;
  }
}

}  // namespace

TreeEncoding::TreeEncoding(ConstraintSystem& cs, const ProgramVars& vars, std::vector<Label> alphabet,
                           int num_nodes)
    : num_nodes_(num_nodes), vars_(vars), alphabet_(std::move(alphabet)) {
  if (num_nodes < 1) throw Error("node budget must be at least 1");
  const int n = num_nodes;
  const int k = num_labels();
  const auto N = static_cast<std::size_t>(n);
  label_.assign(N, std::vector<Lit>(static_cast<std::size_t>(k), 0));
  has_left_.assign(N, 0);
  has_right_.assign(N, 0);
  used_.assign(N, 0);
  right_.assign(N, std::vector<Lit>(N, 0));

  const Lit top = cs.true_lit();
  int skip = -1;
  for (int s = 0; s < k; ++s)
    if (alphabet_[static_cast<std::size_t>(s)].kind == LabelKind::Skip) skip = s;

  for (int t = 0; t < n; ++t) {
    std::vector<Lit> all, left, right;
    for (int s = 0; s < k; ++s) {
      const Label& l = alphabet_[static_cast<std::size_t>(s)];
      if (!fits(l.kind, t, n)) continue;
      // A leaf at the root terminates at once, and the root is a statement.
      if (t == 0 && (label_class(l.kind) != SyntaxClass::Stmt || label_arity(l.kind) == 0)) continue;
      const Lit x = cs.new_named("tau[" + std::to_string(t) + "]=" + label_to_string(l, vars_));
      label_[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = x;
      all.push_back(x);
      if (label_arity(l.kind) >= 1) left.push_back(x);
      if (label_arity(l.kind) == 2) right.push_back(x);
    }
    if (all.empty()) {
      cs.add_clause({-top});
      continue;
    }
    cs.exactly_one(all);
    if (!left.empty()) has_left_[static_cast<std::size_t>(t)] = cs.or_lit(left);
    if (!right.empty()) {
      const Lit hr = cs.or_lit(right);
      has_right_[static_cast<std::size_t>(t)] = hr;
      std::vector<Lit> choices;
      for (int u = t + 2; u < n; ++u) {
        const Lit r = cs.new_named("R[" + std::to_string(t) + "]=" + std::to_string(u));
        right_[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)] = r;
        cs.add_clause({-r, hr});
        choices.push_back(r);
      }
      std::vector<Lit> some = choices;
      some.push_back(-hr);
      cs.add_clause(some);
      cs.at_most_one(choices);
    }
  }

  // Every used node other than the root has exactly one parent, and the
  // used nodes form a prefix.
  used_[0] = top;
  for (int u = 1; u < n; ++u) {
    std::vector<Lit> parents;
    if (has_left_[static_cast<std::size_t>(u - 1)] != 0) parents.push_back(has_left_[static_cast<std::size_t>(u - 1)]);
    for (int p = 0; p + 1 < u; ++p)
      if (const Lit r = right_child(p, u); r != 0) parents.push_back(r);
    const Lit used = cs.or_lit(parents);
    used_[static_cast<std::size_t>(u)] = used;
    cs.at_most_one(parents);
    if (u >= 2) cs.add_clause({-used, used_[static_cast<std::size_t>(u - 1)]});
    if (skip >= 0 && label(u, skip) != 0) cs.add_clause({used, label(u, skip)});
  }

  // Children have the syntax class their parent's label requires.
  std::vector<std::vector<Lit>> cls(N, std::vector<Lit>(3, 0));
  auto class_lit = [&](int t, SyntaxClass c) {
    Lit& slot = cls[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)];
    if (slot == 0) {
      std::vector<Lit> members;
      for (int s = 0; s < k; ++s)
        if (label(t, s) != 0 && label_class(alphabet_[static_cast<std::size_t>(s)].kind) == c)
          members.push_back(label(t, s));
      slot = cs.or_lit(members);
    }
    return slot;
  };
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < k; ++s) {
      const Lit x = label(t, s);
      if (x == 0) continue;
      const LabelKind kind = alphabet_[static_cast<std::size_t>(s)].kind;
      if (const auto c = child_class(kind, Side::Left)) cs.add_clause({-x, class_lit(t + 1, *c)});
      if (const auto c = child_class(kind, Side::Right)) {
        for (int u = t + 2; u < n; ++u)
          if (const Lit r = right_child(t, u)) cs.add_clause({-x, -r, class_lit(u, *c)});
      }
    }
  }
}

int TreeEncoding::label_index(const Label& l) const {
  const auto it = std::find(alphabet_.begin(), alphabet_.end(), l);
  return it == alphabet_.end() ? -1 : static_cast<int>(it - alphabet_.begin());
}

Lit TreeEncoding::right_child(int t, int u) const {
  if (t < 0 || u < 0 || t >= num_nodes_ || u >= num_nodes_) return 0;
  return right_[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)];
}

std::vector<Placement> TreeEncoding::targets(int t, Move move) const {
  std::vector<Placement> out;
  const int n = num_nodes_;
  switch (move) {
    case Move::L:
      if (t + 1 < n) out.push_back({{}, t + 1, Dir::D});
      break;
    case Move::R:
      for (int u = t + 2; u < n; ++u)
        if (const Lit r = right_child(t, u)) out.push_back({{r}, u, Dir::D});
      break;
    case Move::U:
      if (t == 0) break;
      if (const Lit l = has_left(t - 1)) out.push_back({{l}, t - 1, Dir::L});
      for (int p = 0; p + 1 < t; ++p)
        if (const Lit r = right_child(p, t)) out.push_back({{r}, p, Dir::R});
      break;
    case Move::RL:
      for (int u = t + 2; u + 1 < n; ++u)
        if (const Lit r = right_child(t, u)) out.push_back({{r}, u + 1, Dir::D});
      break;
    case Move::RR:
      for (int u = t + 2; u < n; ++u) {
        const Lit r = right_child(t, u);
        if (r == 0) continue;
        for (int w = u + 2; w < n; ++w)
          if (const Lit r2 = right_child(u, w)) out.push_back({{r, r2}, w, Dir::D});
      }
      break;
  }
  return out;
}

ProgramTree TreeEncoding::decode_raw(const Model& m) const {
  ProgramTree tree;
  tree.vars = vars_;
  tree.nodes.resize(static_cast<std::size_t>(num_nodes_));
  for (int t = 0; t < num_nodes_; ++t) {
    auto& node = tree.nodes[static_cast<std::size_t>(t)];
    int chosen = -1;
    for (int s = 0; s < num_labels(); ++s) {
      if (label(t, s) != 0 && m.value(label(t, s))) {
        if (chosen >= 0) throw Error("model assigns two labels to node " + std::to_string(t));
        chosen = s;
      }
    }
    if (chosen < 0) throw Error("model assigns no label to node " + std::to_string(t));
    node.label = alphabet_[static_cast<std::size_t>(chosen)];
    const int arity = label_arity(node.label.kind);
    if (arity >= 1) node.left = t + 1;
    if (arity == 2) {
      for (int u = t + 2; u < num_nodes_; ++u)
        if (right_child(t, u) != 0 && m.value(right_child(t, u))) node.right = u;
      if (node.right < 0) throw Error("model misses the right child of node " + std::to_string(t));
    }
  }
  return tree;
}

ProgramTree TreeEncoding::decode(const Model& m) const { return canonicalize(decode_raw(m)); }

}  // namespace reactsyn
