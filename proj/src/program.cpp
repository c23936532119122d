#include "reactsyn/program.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace reactsyn {

int label_arity(LabelKind kind) {
  switch (kind) {
    case LabelKind::Not:
    case LabelKind::Assign:
      return 1;
    case LabelKind::Or:
    case LabelKind::Seq:
    case LabelKind::If:
    case LabelKind::Then:
    case LabelKind::While:
      return 2;
    default:
      return 0;
  }
}

SyntaxClass label_class(LabelKind kind) {
  switch (kind) {
    case LabelKind::Not:
    case LabelKind::Or:
    case LabelKind::True:
    case LabelKind::False:
    case LabelKind::Var:
      return SyntaxClass::Expr;
    case LabelKind::Then:
      return SyntaxClass::Then;
    default:
      return SyntaxClass::Stmt;
  }
}

std::optional<SyntaxClass> child_class(LabelKind kind, Side side) {
  const bool left = side == Side::Left;
  switch (kind) {
    case LabelKind::Not:
    case LabelKind::Assign:
      if (left) return SyntaxClass::Expr;
      return std::nullopt;
    case LabelKind::Or:
      return SyntaxClass::Expr;
    case LabelKind::Seq:
    case LabelKind::Then:
      return SyntaxClass::Stmt;
    case LabelKind::If:
      return left ? SyntaxClass::Expr : SyntaxClass::Then;
    case LabelKind::While:
      return left ? SyntaxClass::Expr : SyntaxClass::Stmt;
    default:
      return std::nullopt;
  }
}

bool is_io(LabelKind kind) {
  return kind == LabelKind::Input || kind == LabelKind::Output || kind == LabelKind::InOut;
}

int ProgramVars::index_of(const std::string& name) const {
  for (int i = 0; i < num_vars(); ++i)
    if (names[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

ProgramVars make_program_vars(const AlphabetSpec& alphabet, int total_vars) {
  ProgramVars vars;
  vars.num_inputs = alphabet.num_inputs();
  vars.num_outputs = alphabet.num_outputs();
  if (total_vars < vars.num_inputs + vars.num_outputs) {
    throw Error("need at least " + std::to_string(vars.num_inputs + vars.num_outputs) +
                " variables for the declared inputs and outputs");
  }
  vars.names = alphabet.inputs;
  vars.names.insert(vars.names.end(), alphabet.outputs.begin(), alphabet.outputs.end());
  for (int k = 0; static_cast<int>(vars.names.size()) < total_vars; ++k) {
    std::string name = "var" + std::to_string(k);
    while (vars.index_of(name) >= 0) name += "_";
    vars.names.push_back(name);
  }
  return vars;
}

std::vector<Label> program_alphabet(const ProgramVars& vars, IoMode mode) {
  std::vector<Label> out;
  for (LabelKind k : {LabelKind::Not, LabelKind::Or, LabelKind::Seq, LabelKind::If, LabelKind::Then,
                      LabelKind::While, LabelKind::Skip, LabelKind::True, LabelKind::False}) {
    out.push_back(Label{k, -1, {}});
  }
  const int n = vars.num_vars();
  for (int b = 0; b < n; ++b) out.push_back(Label{LabelKind::Var, b, {}});
  for (int b = 0; b < n; ++b) {
    if (mode == IoMode::InOut && vars.is_input(b)) continue;
    out.push_back(Label{LabelKind::Assign, b, {}});
  }
  if (mode == IoMode::InOut) {
    out.push_back(Label{LabelKind::InOut, -1, {}});
    return out;
  }
  // Input vectors of distinct variables, output vectors of any variables.
  std::function<void(std::vector<int>&, int, bool, LabelKind)> tuples = [&](std::vector<int>& cur, int len,
                                                                             bool distinct, LabelKind kind) {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(Label{kind, -1, cur});
      return;
    }
    for (int b = 0; b < n; ++b) {
      if (distinct && std::find(cur.begin(), cur.end(), b) != cur.end()) continue;
      cur.push_back(b);
      tuples(cur, len, distinct, kind);
      cur.pop_back();
    }
  };
  std::vector<int> cur;
  tuples(cur, vars.num_inputs, true, LabelKind::Input);
  tuples(cur, vars.num_outputs, false, LabelKind::Output);
  return out;
}

namespace {

std::string var_name(const ProgramVars& vars, int v) {
  if (v >= 0 && v < vars.num_vars()) return vars.names[static_cast<std::size_t>(v)];
  return "b" + std::to_string(v);
}

std::string vector_text(const ProgramVars& vars, const std::vector<int>& vs) {
  std::string s = "(";
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (k) s += ", ";
    s += var_name(vars, vs[k]);
  }
  return s + ")";
}

}  // namespace

std::string label_to_string(const Label& label, const ProgramVars& vars) {
  switch (label.kind) {
    case LabelKind::Not: return "not";
    case LabelKind::Or: return "or";
    case LabelKind::Seq: return ";";
    case LabelKind::If: return "if";
    case LabelKind::Then: return "then";
    case LabelKind::While: return "while";
    case LabelKind::Skip: return "skip";
    case LabelKind::True: return "tt";
    case LabelKind::False: return "ff";
    case LabelKind::Var: return var_name(vars, label.var);
    case LabelKind::Assign: return "assign " + var_name(vars, label.var);
    case LabelKind::Input: return "input " + vector_text(vars, label.vars);
    case LabelKind::Output: return "output " + vector_text(vars, label.vars);
    case LabelKind::InOut: return "InOut";
  }
  return "?";
}

std::vector<int> ProgramTree::parents() const {
  std::vector<int> p(nodes.size(), -1);
  for (int n = 0; n < size(); ++n) {
    for (int c : {at(n).left, at(n).right})
      if (c >= 0 && c < size()) p[static_cast<std::size_t>(c)] = n;
  }
  return p;
}

std::vector<std::string> ProgramTree::paths() const {
  std::vector<std::string> out(nodes.size());
  if (nodes.empty()) return out;
  std::vector<bool> seen(nodes.size(), false);
  std::vector<int> work{0};
  seen[0] = true;
  while (!work.empty()) {
    const int n = work.back();
    work.pop_back();
    const auto& node = at(n);
    for (auto [c, step] : {std::pair{node.left, 'L'}, std::pair{node.right, 'R'}}) {
      if (c < 0 || c >= size() || seen[static_cast<std::size_t>(c)]) continue;
      seen[static_cast<std::size_t>(c)] = true;
      out[static_cast<std::size_t>(c)] = out[static_cast<std::size_t>(n)] + step;
      work.push_back(c);
    }
  }
  return out;
}

bool ProgramTree::uses_inout() const {
  return std::any_of(nodes.begin(), nodes.end(), [](const Node& n) { return n.label.kind == LabelKind::InOut; });
}

std::vector<bool> ProgramTree::referenced_vars() const {
  std::vector<bool> used(static_cast<std::size_t>(vars.num_vars()), false);
  auto mark = [&](int v) {
    if (v >= 0 && v < vars.num_vars()) used[static_cast<std::size_t>(v)] = true;
  };
  for (const auto& n : nodes) {
    mark(n.label.var);
    for (int v : n.label.vars) mark(v);
    if (n.label.kind == LabelKind::InOut) {
      for (int v = 0; v < vars.num_inputs + vars.num_outputs; ++v) mark(v);
    }
  }
  return used;
}

int ProgramTree::additional_vars() const {
  const auto used = referenced_vars();
  int count = 0;
  for (int v = vars.num_inputs + vars.num_outputs; v < vars.num_vars(); ++v)
    if (used[static_cast<std::size_t>(v)]) ++count;
  return count;
}

ProgramTree canonicalize(const ProgramTree& tree) {
  ProgramTree out;
  out.vars = tree.vars;
  if (tree.nodes.empty()) return out;
  std::vector<bool> seen(tree.nodes.size(), false);
  std::function<int(int)> copy = [&](int n) -> int {
    if (n < 0 || n >= tree.size() || seen[static_cast<std::size_t>(n)]) return -1;
    seen[static_cast<std::size_t>(n)] = true;
    const int id = out.size();
    out.nodes.push_back({tree.at(n).label, -1, -1});
    const int l = copy(tree.at(n).left);
    const int r = copy(tree.at(n).right);
    out.nodes[static_cast<std::size_t>(id)].left = l;
    out.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  };
  copy(0);
  return out;
}

bool same_tree(const ProgramTree& a, const ProgramTree& b) {
  const ProgramTree ca = canonicalize(a);
  const ProgramTree cb = canonicalize(b);
  if (ca.size() != cb.size()) return false;
  for (int n = 0; n < ca.size(); ++n) {
    if (!(ca.at(n).label == cb.at(n).label) || ca.at(n).left != cb.at(n).left || ca.at(n).right != cb.at(n).right) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Interpreter core

namespace {

struct Frame {
  int node;
  int phase;
  auto operator<=>(const Frame&) const = default;
};

enum class StepOutcome { Continue, AtIo, Terminated };

using Valuation = std::uint64_t;

bool get_bit(Valuation s, int v) { return ((s >> v) & 1U) != 0; }
Valuation set_bit(Valuation s, int v, bool value) {
  return value ? (s | (Valuation{1} << v)) : (s & ~(Valuation{1} << v));
}

// One statement step. `cond` evaluates the expression subtree at a node.
template <typename Cond>
StepOutcome step_once(const ProgramTree& tree, std::vector<Frame>& stack, Valuation& s, Cond&& cond) {
  if (stack.empty()) return StepOutcome::Terminated;
  Frame& f = stack.back();
  const auto& n = tree.at(f.node);
  switch (n.label.kind) {
    case LabelKind::Seq:
      if (f.phase == 0) {
        f.phase = 1;
        stack.push_back({n.left, 0});
      } else {
        const int right = n.right;
        stack.pop_back();
        stack.push_back({right, 0});
      }
      return StepOutcome::Continue;
    case LabelKind::While:
      if (cond(n.left)) {
        stack.push_back({n.right, 0});
      } else {
        stack.pop_back();
      }
      return StepOutcome::Continue;
    case LabelKind::If: {
      const bool c = cond(n.left);
      const auto& then = tree.at(n.right);
      const int target = c ? then.left : then.right;
      stack.pop_back();
      stack.push_back({target, 0});
      return StepOutcome::Continue;
    }
    case LabelKind::Assign: {
      const int var = n.label.var;
      const bool value = cond(n.left);
      s = set_bit(s, var, value);
      stack.pop_back();
      return StepOutcome::Continue;
    }
    case LabelKind::Skip:
      stack.pop_back();
      return StepOutcome::Continue;
    case LabelKind::Input:
    case LabelKind::Output:
    case LabelKind::InOut:
      return StepOutcome::AtIo;
    default:
      throw Error("interpreter: label '" + label_to_string(n.label, tree.vars) + "' in statement position");
  }
}

class Machine {
 public:
  explicit Machine(const ProgramTree& tree) : tree_(tree) { stack_.push_back({0, 0}); }

  // Runs to the next I/O statement and returns its node.
  int advance(std::uint64_t budget) {
    std::uint64_t steps = 0;
    for (;;) {
      const auto outcome = step_once(tree_, stack_, s_, [&](int e) { return eval_bool_expr(tree_, e, s_); });
      if (outcome == StepOutcome::AtIo) return stack_.back().node;
      if (outcome == StepOutcome::Terminated) throw NonReactiveError("program terminates");
      if (++steps > budget) throw NonReactiveError("program diverges without input or output");
    }
  }
  void resume() { stack_.pop_back(); }

  const std::vector<Frame>& stack() const { return stack_; }
  Valuation valuation() const { return s_; }
  void set_valuation(Valuation s) { s_ = s; }
  void restore(const std::vector<Frame>& stack, Valuation s) {
    stack_ = stack;
    s_ = s;
  }

 private:
  const ProgramTree& tree_;
  std::vector<Frame> stack_;
  Valuation s_ = 0;
};

// Variables overwritten by the read at I/O node `node`.
Valuation read_mask(const ProgramTree& tree, int node) {
  const auto& label = tree.at(node).label;
  Valuation mask = 0;
  if (label.kind == LabelKind::InOut) {
    for (int v = 0; v < tree.vars.num_inputs; ++v) mask |= Valuation{1} << v;
  } else {
    for (int v : label.vars) mask |= Valuation{1} << v;
  }
  return mask;
}

Valuation apply_input(const ProgramTree& tree, int node, Valuation s, std::uint32_t input) {
  const auto& label = tree.at(node).label;
  if (label.kind == LabelKind::InOut) {
    for (int j = 0; j < tree.vars.num_inputs; ++j) s = set_bit(s, j, (input >> j) & 1U);
  } else {
    for (std::size_t j = 0; j < label.vars.size(); ++j) s = set_bit(s, label.vars[j], (input >> j) & 1U);
  }
  return s;
}

std::uint32_t read_output(const ProgramTree& tree, int node, Valuation s) {
  const auto& label = tree.at(node).label;
  std::uint32_t out = 0;
  if (label.kind == LabelKind::InOut) {
    for (int k = 0; k < tree.vars.num_outputs; ++k)
      if (get_bit(s, tree.vars.num_inputs + k)) out |= 1U << k;
  } else {
    for (std::size_t k = 0; k < label.vars.size(); ++k)
      if (get_bit(s, label.vars[k])) out |= 1U << k;
  }
  return out;
}

void require_valid(const ProgramTree& tree) {
  const auto report = validate_program_tree(tree);
  if (!report.ok()) throw Error("invalid program tree: " + report.violations.front());
  if (tree.vars.num_vars() > 64) throw Error("at most 64 program variables are supported");
}

// Drives the machine from one read point to the next, returning the output.
// On entry the machine sits at an input (or InOut) node.
std::uint32_t transit(const ProgramTree& tree, Machine& m, std::uint32_t input, std::uint64_t budget) {
  const int read_node = m.stack().back().node;
  m.set_valuation(apply_input(tree, read_node, m.valuation(), input));
  m.resume();
  const int node = m.advance(budget);
  const LabelKind kind = tree.at(node).label.kind;
  if (tree.at(read_node).label.kind == LabelKind::InOut) {
    if (kind != LabelKind::InOut) throw NonReactiveError("program mixes InOut with input/output statements");
    return read_output(tree, node, m.valuation());
  }
  if (kind != LabelKind::Output) throw NonReactiveError("input is not followed by an output statement");
  const std::uint32_t out = read_output(tree, node, m.valuation());
  m.resume();
  const int next = m.advance(budget);
  if (tree.at(next).label.kind != LabelKind::Input) {
    throw NonReactiveError("output is not followed by an input statement");
  }
  return out;
}

void to_first_read(const ProgramTree& tree, Machine& m, std::uint64_t budget) {
  const int node = m.advance(budget);
  const LabelKind kind = tree.at(node).label.kind;
  if (kind == LabelKind::Output) throw NonReactiveError("output before the first input");
  (void)kind;
}

}  // namespace

bool eval_bool_expr(const ProgramTree& tree, int node, std::uint64_t s) {
  if (node < 0 || node >= tree.size()) throw Error("eval_bool_expr: missing expression node");
  const auto& n = tree.at(node);
  switch (n.label.kind) {
    case LabelKind::True: return true;
    case LabelKind::False: return false;
    case LabelKind::Var: return get_bit(s, n.label.var);
    case LabelKind::Not: return !eval_bool_expr(tree, n.left, s);
    case LabelKind::Or: return eval_bool_expr(tree, n.left, s) || eval_bool_expr(tree, n.right, s);
    default:
      throw Error("eval_bool_expr: '" + label_to_string(n.label, tree.vars) + "' is not an expression");
  }
}

ValidationReport validate_program_tree(const ProgramTree& tree) {
  ValidationReport report;
  auto& v = report.violations;
  if (tree.nodes.empty()) {
    v.push_back("empty tree");
    return report;
  }
  const int n = tree.size();
  const auto paths = tree.paths();
  auto where = [&](int node) { return "node " + std::to_string(node) + " ('" + paths[static_cast<std::size_t>(node)] + "')"; };
  std::vector<int> parent_count(static_cast<std::size_t>(n), 0);
  bool structure_ok = true;
  for (int k = 0; k < n; ++k) {
    for (int c : {tree.at(k).left, tree.at(k).right}) {
      if (c == -1) continue;
      if (c < 0 || c >= n) {
        v.push_back(where(k) + ": child index out of range");
        structure_ok = false;
        continue;
      }
      ++parent_count[static_cast<std::size_t>(c)];
    }
  }
  if (!structure_ok) return report;
  if (parent_count[0] != 0) {
    v.push_back("root has a parent");
    return report;
  }
  for (int k = 1; k < n; ++k) {
    if (parent_count[static_cast<std::size_t>(k)] != 1) {
      v.push_back("node " + std::to_string(k) + " has " + std::to_string(parent_count[static_cast<std::size_t>(k)]) +
                  " parents");
      structure_ok = false;
    }
  }
  if (!structure_ok) return report;
  // With one parent per non-root node, unreachable nodes lie on cycles.
  std::vector<bool> reach(static_cast<std::size_t>(n), false);
  std::vector<int> work{0};
  reach[0] = true;
  while (!work.empty()) {
    const int k = work.back();
    work.pop_back();
    for (int c : {tree.at(k).left, tree.at(k).right}) {
      if (c >= 0 && !reach[static_cast<std::size_t>(c)]) {
        reach[static_cast<std::size_t>(c)] = true;
        work.push_back(c);
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    if (!reach[static_cast<std::size_t>(k)]) {
      v.push_back("node " + std::to_string(k) + " is not reachable from the root");
      return report;
    }
  }

  bool has_inout = false;
  bool has_split = false;
  const auto& vars = tree.vars;
  for (int k = 0; k < n; ++k) {
    const auto& node = tree.at(k);
    const LabelKind kind = node.label.kind;
    if (node.left < 0 && node.right >= 0) v.push_back(where(k) + ": right child without a left child");
    const int children = (node.left >= 0 ? 1 : 0) + (node.right >= 0 ? 1 : 0);
    if (children != label_arity(kind)) {
      v.push_back(where(k) + ": label '" + label_to_string(node.label, vars) + "' needs " +
                  std::to_string(label_arity(kind)) + " children, has " + std::to_string(children));
    }
    if (kind == LabelKind::Var || kind == LabelKind::Assign) {
      if (node.label.var < 0 || node.label.var >= vars.num_vars()) v.push_back(where(k) + ": unknown variable");
    }
    if (kind == LabelKind::Input || kind == LabelKind::Output) {
      has_split = true;
      const int want = kind == LabelKind::Input ? vars.num_inputs : vars.num_outputs;
      if (static_cast<int>(node.label.vars.size()) != want) v.push_back(where(k) + ": vector length mismatch");
      for (int b : node.label.vars)
        if (b < 0 || b >= vars.num_vars()) v.push_back(where(k) + ": unknown variable");
    }
    if (kind == LabelKind::InOut) has_inout = true;
    // Syntax classes of the children.
    for (auto [c, side] : {std::pair{node.left, Side::Left}, std::pair{node.right, Side::Right}}) {
      const auto want = child_class(kind, side);
      if (c < 0 || !want) continue;
      if (label_class(tree.at(c).label.kind) != *want) {
        v.push_back(where(c) + ": label '" + label_to_string(tree.at(c).label, vars) + "' not allowed here");
      }
    }
  }
  if (label_class(tree.at(0).label.kind) != SyntaxClass::Stmt) v.push_back("root is not a statement");
  if (has_inout && has_split) v.push_back("InOut mixed with input/output statements");
  if (has_inout && vars.num_vars() < vars.num_inputs + vars.num_outputs) {
    v.push_back("InOut needs distinct designated input and output variables");
  }
  if (!v.empty() || has_inout) return report;

  // Alternation: explore control configurations with both outcomes of
  // every condition and track whether an input or output is due next.
  std::set<std::pair<std::vector<Frame>, bool>> seen;
  std::vector<std::pair<std::vector<Frame>, bool>> todo{{{Frame{0, 0}}, true}};
  while (!todo.empty() && report.io_alternates) {
    auto [stack, want_input] = todo.back();
    todo.pop_back();
    if (!seen.insert({stack, want_input}).second) continue;
    if (seen.size() > 100000) break;
    if (stack.empty()) continue;
    const auto& top = tree.at(stack.back().node);
    if (is_io(top.label.kind)) {
      const bool is_input = top.label.kind == LabelKind::Input;
      if (is_input != want_input) {
        report.io_alternates = false;
        break;
      }
      auto next = stack;
      next.pop_back();
      todo.push_back({next, !want_input});
      continue;
    }
    for (bool outcome : {false, true}) {
      bool consulted = false;
      auto next = stack;
      Valuation s = 0;
      step_once(tree, next, s, [&](int) {
        consulted = true;
        return outcome;
      });
      todo.push_back({next, want_input});
      if (!consulted) break;
    }
  }
  return report;
}

std::vector<IoStep> run_program(const ProgramTree& tree, const std::vector<std::uint32_t>& inputs,
                                std::uint64_t step_budget) {
  require_valid(tree);
  Machine m(tree);
  std::vector<IoStep> trace;
  if (inputs.empty()) return trace;
  to_first_read(tree, m, step_budget);
  for (std::uint32_t in : inputs) trace.push_back({in, transit(tree, m, in, step_budget)});
  return trace;
}

std::vector<IoStep> MealyMachine::run(const std::vector<std::uint32_t>& inputs) const {
  std::vector<IoStep> trace;
  int state = initial;
  for (std::uint32_t in : inputs) {
    trace.push_back({in, out[static_cast<std::size_t>(state)][in]});
    state = next[static_cast<std::size_t>(state)][in];
  }
  return trace;
}

MealyMachine extract_mealy(const ProgramTree& tree, std::size_t config_budget, std::uint64_t step_budget) {
  require_valid(tree);
  using Config = std::pair<std::vector<Frame>, Valuation>;
  Machine m(tree);
  to_first_read(tree, m, step_budget);
  auto key = [&](const Machine& mm) {
    const int node = mm.stack().back().node;
    return Config{mm.stack(), mm.valuation() & ~read_mask(tree, node)};
  };
  std::map<Config, int> ids;
  std::vector<Config> configs;
  auto id_of = [&](const Config& c) {
    auto it = ids.find(c);
    if (it != ids.end()) return it->second;
    if (configs.size() >= config_budget) throw Error("configuration budget exceeded during Mealy extraction");
    const int id = static_cast<int>(configs.size());
    ids.emplace(c, id);
    configs.push_back(c);
    return id;
  };
  MealyMachine mealy;
  mealy.num_inputs = tree.vars.num_inputs;
  mealy.num_outputs = tree.vars.num_outputs;
  mealy.initial = id_of(key(m));
  const std::uint32_t letters = 1U << mealy.num_inputs;
  for (std::size_t cur = 0; cur < configs.size(); ++cur) {
    std::vector<int> nxt(letters);
    std::vector<std::uint32_t> outs(letters);
    for (std::uint32_t in = 0; in < letters; ++in) {
      const Config c = configs[cur];
      m.restore(c.first, c.second);
      outs[in] = transit(tree, m, in, step_budget);
      nxt[in] = id_of(key(m));
    }
    mealy.next.push_back(std::move(nxt));
    mealy.out.push_back(std::move(outs));
  }
  return mealy;
}

MealyMachine minimize_mealy(const MealyMachine& m) {
  const int n = m.num_states();
  const std::uint32_t letters = 1U << m.num_inputs;
  std::vector<int> block(static_cast<std::size_t>(n), 0);
  int count = 0;
  for (;;) {
    std::map<std::vector<std::int64_t>, int> sigs;
    std::vector<int> refined(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      std::vector<std::int64_t> sig{block[static_cast<std::size_t>(q)]};
      for (std::uint32_t in = 0; in < letters; ++in) {
        sig.push_back(m.out[static_cast<std::size_t>(q)][in]);
        sig.push_back(block[static_cast<std::size_t>(m.next[static_cast<std::size_t>(q)][in])]);
      }
      refined[static_cast<std::size_t>(q)] = sigs.emplace(sig, static_cast<int>(sigs.size())).first->second;
    }
    block = refined;
    if (static_cast<int>(sigs.size()) == count) break;
    count = static_cast<int>(sigs.size());
  }
  // Renumber so that the initial state comes first.
  std::vector<int> order(static_cast<std::size_t>(count), -1);
  int next_id = 0;
  order[static_cast<std::size_t>(block[static_cast<std::size_t>(m.initial)])] = next_id++;
  for (int q = 0; q < n; ++q) {
    auto& o = order[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])];
    if (o < 0) o = next_id++;
  }
  MealyMachine out;
  out.num_inputs = m.num_inputs;
  out.num_outputs = m.num_outputs;
  out.initial = 0;
  out.next.assign(static_cast<std::size_t>(count), std::vector<int>(letters));
  out.out.assign(static_cast<std::size_t>(count), std::vector<std::uint32_t>(letters));
  for (int q = 0; q < n; ++q) {
    const int b = order[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])];
    for (std::uint32_t in = 0; in < letters; ++in) {
      out.out[static_cast<std::size_t>(b)][in] = m.out[static_cast<std::size_t>(q)][in];
      out.next[static_cast<std::size_t>(b)][in] =
          order[static_cast<std::size_t>(block[static_cast<std::size_t>(m.next[static_cast<std::size_t>(q)][in])])];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_expr(const ProgramTree& t, int n, std::ostream& out) {
  const auto& node = t.at(n);
  switch (node.label.kind) {
    case LabelKind::True: out << "tt"; break;
    case LabelKind::False: out << "ff"; break;
    case LabelKind::Var: out << var_name(t.vars, node.label.var); break;
    case LabelKind::Not:
      out << "not ";
      print_expr(t, node.left, out);
      break;
    case LabelKind::Or:
      out << '(';
      print_expr(t, node.left, out);
      out << " or ";
      print_expr(t, node.right, out);
      out << ')';
      break;
    default:
      out << "<" << label_to_string(node.label, t.vars) << ">";
  }
}

void print_stmt(const ProgramTree& t, int n, int indent, std::ostream& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const auto& node = t.at(n);
  switch (node.label.kind) {
    case LabelKind::Seq: {
      const bool block = t.at(node.left).label.kind == LabelKind::Seq;
      if (block) {
        out << pad << "{\n";
        print_stmt(t, node.left, indent + 1, out);
        out << '\n' << pad << '}';
      } else {
        print_stmt(t, node.left, indent, out);
      }
      out << ";\n";
      print_stmt(t, node.right, indent, out);
      return;
    }
    case LabelKind::While:
      out << pad << "while (";
      print_expr(t, node.left, out);
      out << ") {\n";
      print_stmt(t, node.right, indent + 1, out);
      out << '\n' << pad << '}';
      return;
    case LabelKind::If: {
      const auto& then = t.at(node.right);
      out << pad << "if (";
      print_expr(t, node.left, out);
      out << ") then {\n";
      print_stmt(t, then.left, indent + 1, out);
      out << '\n' << pad << "} else {\n";
      print_stmt(t, then.right, indent + 1, out);
      out << '\n' << pad << '}';
      return;
    }
    case LabelKind::Assign:
      out << pad << var_name(t.vars, node.label.var) << " = ";
      print_expr(t, node.left, out);
      return;
    case LabelKind::Skip: out << pad << "skip"; return;
    case LabelKind::Input: out << pad << "input " << vector_text(t.vars, node.label.vars); return;
    case LabelKind::Output: out << pad << "output " << vector_text(t.vars, node.label.vars); return;
    case LabelKind::InOut: out << pad << "InOut"; return;
    default:
      out << pad << "<" << label_to_string(node.label, t.vars) << ">";
  }
}

// ---------------------------------------------------------------------------
// Parsing

struct PToken {
  enum Kind { Ident, Sym, End } kind;
  std::string text;
  int line;
  int column;
};

std::vector<PToken> lex_program(const std::string& text) {
  std::vector<PToken> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t k) {
    i += k;
    column += static_cast<int>(k);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t e = i;
      while (e < text.size() && (std::isalnum(static_cast<unsigned char>(text[e])) || text[e] == '_')) ++e;
      out.push_back({PToken::Ident, text.substr(i, e - i), line, column});
      adv(e - i);
      continue;
    }
    static const std::pair<const char*, const char*> syms[] = {
        {":=", "="}, {"||", "|"}, {"\xC2\xAC", "!"}, {"\xE2\x88\xA8", "|"}, {"(", "("}, {")", ")"}, {"{", "{"},
        {"}", "}"},  {";", ";"},  {",", ","},          {"=", "="},          {"!", "!"}, {"|", "|"}};
    bool matched = false;
    for (const auto& [spelling, norm] : syms) {
      const std::string s(spelling);
      if (text.compare(i, s.size(), s) == 0) {
        out.push_back({PToken::Sym, norm, line, column});
        adv(s.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line, column);
  }
  out.push_back({PToken::End, "", line, column});
  return out;
}

class ProgramParser {
 public:
  ProgramParser(std::vector<PToken> tokens, ProgramTree& tree) : toks_(std::move(tokens)), tree_(tree) {}

  void parse() {
    parse_stmts();
    if (peek().kind != PToken::End) fail("unexpected '" + peek().text + "'");
  }

 private:
  const PToken& peek() const { return toks_[pos_]; }
  PToken take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  bool at(const char* s) const { return peek().text == s && peek().kind != PToken::End; }
  void expect(const char* s) {
    if (!at(s)) fail(std::string("expected '") + s + "'");
    take();
  }

  int add(LabelKind kind, int var = -1, std::vector<int> vars = {}) {
    tree_.nodes.push_back({Label{kind, var, std::move(vars)}, -1, -1});
    return tree_.size() - 1;
  }
  void set_children(int n, int l, int r) {
    tree_.nodes[static_cast<std::size_t>(n)].left = l;
    tree_.nodes[static_cast<std::size_t>(n)].right = r;
  }

  int variable(const PToken& t) {
    static const std::set<std::string> reserved{"while", "if",  "then", "else", "skip", "input", "output",
                                                "InOut", "tt",  "ff",   "true", "false", "not",  "or"};
    if (reserved.count(t.text) != 0) throw ParseError("keyword '" + t.text + "' used as a variable", t.line, t.column);
    int idx = tree_.vars.index_of(t.text);
    if (idx < 0) {
      tree_.vars.names.push_back(t.text);
      idx = tree_.vars.num_vars() - 1;
    }
    return idx;
  }

  bool stmt_ends() const { return at("}") || peek().kind == PToken::End; }

  // stmts := stmt (';' stmt)* [';']  -- right nested
  int parse_stmts() {
    const int seq_or_stmt = tree_.size();
    (void)seq_or_stmt;
    // Reserve a Seq node lazily so the pre-order numbering matches.
    const std::size_t mark = tree_.nodes.size();
    const int first = parse_stmt();
    if (at(";")) {
      take();
      if (stmt_ends()) return first;
      // Insert a Seq node in front of the first statement's subtree.
      tree_.nodes.insert(tree_.nodes.begin() + static_cast<std::ptrdiff_t>(mark),
                         ProgramTree::Node{Label{LabelKind::Seq, -1, {}}, -1, -1});
      for (std::size_t k = mark + 1; k < tree_.nodes.size(); ++k) {
        auto& nd = tree_.nodes[k];
        if (nd.left >= static_cast<int>(mark)) ++nd.left;
        if (nd.right >= static_cast<int>(mark)) ++nd.right;
      }
      const int seq = static_cast<int>(mark);
      const int left = first + 1;
      const int right = parse_stmts();
      set_children(seq, left, right);
      return seq;
    }
    return first;
  }

  int parse_stmt() {
    const PToken t = peek();
    if (t.kind == PToken::End) fail("unexpected end of program");
    if (at("{")) {
      take();
      const int inner = parse_stmts();
      expect("}");
      return inner;
    }
    if (t.kind != PToken::Ident) fail("expected a statement");
    if (t.text == "while") {
      take();
      const int n = add(LabelKind::While);
      expect("(");
      const int c = parse_expr();
      expect(")");
      expect("{");
      const int body = parse_stmts();
      expect("}");
      set_children(n, c, body);
      return n;
    }
    if (t.text == "if") {
      take();
      const int n = add(LabelKind::If);
      expect("(");
      const int c = parse_expr();
      expect(")");
      if (at("then")) take();
      const int then = add(LabelKind::Then);
      expect("{");
      const int a = parse_stmts();
      expect("}");
      if (!at("else")) fail("expected 'else'");
      take();
      expect("{");
      const int b = parse_stmts();
      expect("}");
      set_children(then, a, b);
      set_children(n, c, then);
      return n;
    }
    if (t.text == "skip") {
      take();
      return add(LabelKind::Skip);
    }
    if (t.text == "InOut" || t.text == "inout") {
      take();
      return add(LabelKind::InOut);
    }
    if (t.text == "input" || t.text == "output") {
      take();
      std::vector<int> vs;
      if (at("(")) {
        take();
        for (;;) {
          if (peek().kind != PToken::Ident) fail("expected a variable");
          vs.push_back(variable(take()));
          if (at(",")) {
            take();
            continue;
          }
          break;
        }
        expect(")");
      } else {
        if (peek().kind != PToken::Ident) fail("expected a variable");
        vs.push_back(variable(take()));
      }
      return add(t.text == "input" ? LabelKind::Input : LabelKind::Output, -1, vs);
    }
    // Assignment.
    take();
    const int var = variable(t);
    expect("=");
    const int n = add(LabelKind::Assign, var);
    const int e = parse_expr();
    set_children(n, e, -1);
    return n;
  }

  // Left-associative disjunction; pre-order numbering requires inserting
  // the Or node ahead of its left operand.
  int parse_expr() {
    const std::size_t mark = tree_.nodes.size();
    int lhs = parse_unary();
    while (at("|") || at("or")) {
      take();
      tree_.nodes.insert(tree_.nodes.begin() + static_cast<std::ptrdiff_t>(mark),
                         ProgramTree::Node{Label{LabelKind::Or, -1, {}}, -1, -1});
      for (std::size_t k = mark + 1; k < tree_.nodes.size(); ++k) {
        auto& nd = tree_.nodes[k];
        if (nd.left >= static_cast<int>(mark)) ++nd.left;
        if (nd.right >= static_cast<int>(mark)) ++nd.right;
      }
      const int left = lhs + 1;
      const int right = parse_unary();
      set_children(static_cast<int>(mark), left, right);
      lhs = static_cast<int>(mark);
    }
    return lhs;
  }

  int parse_unary() {
    if (at("!") || at("not")) {
      take();
      const int n = add(LabelKind::Not);
      const int e = parse_unary();
      set_children(n, e, -1);
      return n;
    }
    if (at("(")) {
      take();
      const int e = parse_expr();
      expect(")");
      return e;
    }
    if (peek().kind != PToken::Ident) fail("expected an expression");
    const PToken t = take();
    if (t.text == "tt" || t.text == "true") return add(LabelKind::True);
    if (t.text == "ff" || t.text == "false") return add(LabelKind::False);
    return add(LabelKind::Var, variable(t));
  }

  std::vector<PToken> toks_;
  std::size_t pos_ = 0;
  ProgramTree& tree_;
};

}  // namespace

std::string print_program(const ProgramTree& tree) {
  std::ostringstream out;
  if (!tree.nodes.empty()) print_stmt(tree, 0, 0, out);
  out << '\n';
  return out.str();
}

ProgramTree parse_program(const std::string& text, const AlphabetSpec& alphabet) {
  ProgramTree tree;
  tree.vars = make_program_vars(alphabet, alphabet.num_inputs() + alphabet.num_outputs());
  ProgramParser(lex_program(text), tree).parse();
  return tree;
}

ProgramTree load_program(const std::string& path, const AlphabetSpec& alphabet) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open program file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), alphabet);
}

std::string program_to_json(const ProgramTree& tree) {
  nlohmann::json j = nlohmann::json::array();
  const auto paths = tree.paths();
  for (int n = 0; n < tree.size(); ++n) {
    j.push_back({{"path", paths[static_cast<std::size_t>(n)]}, {"label", label_to_string(tree.at(n).label, tree.vars)}});
  }
  return j.dump(2);
}

bool traces_equal(const ProgramTree& a, const ProgramTree& b, int length) {
  const int ni = a.vars.num_inputs;
  if (b.vars.num_inputs != ni) throw Error("traces_equal: input arities differ");
  const std::uint64_t letters = std::uint64_t{1} << ni;
  std::vector<std::uint32_t> word(static_cast<std::size_t>(length), 0);
  while (true) {
    if (run_program(a, word) != run_program(b, word)) return false;
    // Next word in lexicographic order.
    int pos = length - 1;
    while (pos >= 0 && word[static_cast<std::size_t>(pos)] + 1 == letters) word[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) return true;
    ++word[static_cast<std::size_t>(pos)];
  }
}

}  // namespace reactsyn
