#include "reactsyn/two_way_automaton.hpp"

#include <deque>
#include <ostream>
#include <sstream>

namespace reactsyn {

const char* to_string(Dir d) {
  switch (d) {
    case Dir::D: return "D";
    case Dir::L: return "L";
    case Dir::R: return "R";
  }
  return "?";
}

const char* to_string(Move m) {
  switch (m) {
    case Move::L: return "L";
    case Move::R: return "R";
    case Move::U: return "U";
    case Move::RL: return "RL";
    case Move::RR: return "RR";
  }
  return "?";
}

std::pair<std::string, Dir> mu_step(const std::string& node, Move move) {
  switch (move) {
    case Move::L: return {node + "L", Dir::D};
    case Move::R: return {node + "R", Dir::D};
    case Move::RL: return {node + "RL", Dir::D};
    case Move::RR: return {node + "RR", Dir::D};
    case Move::U:
      if (node.empty()) throw Error("cannot move up from the root");
      return {node.substr(0, node.size() - 1), node.back() == 'L' ? Dir::L : Dir::R};
  }
  throw Error("invalid move");
}

TwoWayAutomaton::TwoWayAutomaton(ProgramVars vars, IoMode mode, WordAutomaton spec)
    : vars_(std::move(vars)), mode_(mode), spec_(std::move(spec)) {
  if (vars_.num_vars() > 20) throw Error("the two-way automaton supports at most 20 variables");
  if (spec_.num_atoms != vars_.num_inputs + vars_.num_outputs) {
    throw Error("specification automaton has " + std::to_string(spec_.num_atoms) + " atoms, expected " +
                std::to_string(vars_.num_inputs + vars_.num_outputs));
  }
  alphabet_ = program_alphabet(vars_, mode_);
  num_vals_ = 1U << vars_.num_vars();
  num_inputs_vals_ = 1U << vars_.num_inputs;
  num_states_ = static_cast<int>(8U * num_inputs_vals_ * static_cast<std::uint32_t>(spec_.num_states()) * num_vals_);
}

int TwoWayAutomaton::index(const TwoWayState& st) const {
  std::uint64_t k = st.expr ? 1 : 0;
  k = k * 2 + (st.flag ? 1 : 0);
  k = k * 2 + (st.m_out ? 1 : 0);
  k = k * num_inputs_vals_ + st.i;
  k = k * static_cast<std::uint64_t>(spec_.num_states()) + static_cast<std::uint64_t>(st.q);
  k = k * num_vals_ + st.s;
  return static_cast<int>(k);
}

TwoWayState TwoWayAutomaton::state(int p) const {
  auto k = static_cast<std::uint64_t>(p);
  TwoWayState st;
  st.s = static_cast<std::uint32_t>(k % num_vals_);
  k /= num_vals_;
  st.q = static_cast<int>(k % static_cast<std::uint64_t>(spec_.num_states()));
  k /= static_cast<std::uint64_t>(spec_.num_states());
  st.i = static_cast<std::uint32_t>(k % num_inputs_vals_);
  k /= num_inputs_vals_;
  st.m_out = (k % 2) != 0;
  k /= 2;
  st.flag = (k % 2) != 0;
  st.expr = (k / 2) != 0;
  return st;
}

std::string TwoWayAutomaton::state_to_string(int p) const {
  const TwoWayState st = state(p);
  std::ostringstream out;
  out << (st.expr ? "expr(" : "exec(") << "s=";
  for (int v = 0; v < vars_.num_vars(); ++v) out << ((st.s >> v) & 1U);
  out << ",q=" << st.q << ",i=";
  for (int j = 0; j < vars_.num_inputs; ++j) out << ((st.i >> j) & 1U);
  out << ",m=" << (st.m_out ? "out" : "inp") << (st.expr ? ",r=" : ",t=") << (st.flag ? 1 : 0) << ')';
  return out.str();
}

Letter TwoWayAutomaton::letter(std::uint32_t i, std::uint32_t s, const std::vector<int>& out_vars) const {
  Letter l = i;
  for (std::size_t k = 0; k < out_vars.size(); ++k)
    if ((s >> out_vars[k]) & 1U) l |= Letter{1} << (vars_.num_inputs + static_cast<int>(k));
  return l;
}

std::vector<TwoWayTransition> TwoWayAutomaton::delta(int p, const Label& label, Dir d) const {
  const TwoWayState st = state(p);
  std::vector<TwoWayTransition> out;
  auto emit = [&](TwoWayState next, Move m) { out.push_back({index(next), m}); };
  auto with_bit = [](std::uint32_t s, int v, bool b) { return b ? (s | (1U << v)) : (s & ~(1U << v)); };
  auto exec = [](TwoWayState x) {
    x.expr = false;
    x.flag = false;
    return x;
  };
  auto expr = [](TwoWayState x) {
    x.expr = true;
    x.flag = false;
    return x;
  };

  if (st.expr) {
    switch (label.kind) {
      case LabelKind::True:
      case LabelKind::False:
      case LabelKind::Var:
        if (d == Dir::D && !st.flag) {
          TwoWayState n = st;
          n.flag = label.kind == LabelKind::True || (label.kind == LabelKind::Var && ((st.s >> label.var) & 1U));
          emit(n, Move::U);
        }
        break;
      case LabelKind::Or:
        if (d == Dir::D && !st.flag) emit(st, Move::L);
        if (d == Dir::L) emit(st, st.flag ? Move::U : Move::R);
        if (d == Dir::R) emit(st, Move::U);
        break;
      case LabelKind::Not:
        if (d == Dir::D && !st.flag) emit(st, Move::L);
        if (d == Dir::L) {
          TwoWayState n = st;
          n.flag = !st.flag;
          emit(n, Move::U);
        }
        break;
      // Statements receiving the value of their condition or right-hand side.
      case LabelKind::Assign:
        if (d == Dir::L) {
          TwoWayState n = exec(st);
          n.s = with_bit(st.s, label.var, st.flag);
          emit(n, Move::U);
        }
        break;
      case LabelKind::If:
        if (d == Dir::L) emit(exec(st), st.flag ? Move::RL : Move::RR);
        break;
      case LabelKind::While:
        if (d == Dir::L) emit(exec(st), st.flag ? Move::R : Move::U);
        break;
      default:
        break;
    }
    return out;
  }

  switch (label.kind) {
    case LabelKind::Skip:
      if (d == Dir::D) emit(exec(st), Move::U);
      break;
    case LabelKind::Assign:
    case LabelKind::If:
      if (d == Dir::D) emit(expr(st), Move::L);
      if (label.kind == LabelKind::If && d == Dir::R) emit(exec(st), Move::U);
      break;
    case LabelKind::While:
      if (d == Dir::D || d == Dir::R) emit(expr(st), Move::L);
      break;
    case LabelKind::Seq:
      if (d == Dir::D) emit(exec(st), Move::L);
      if (d == Dir::L) emit(exec(st), Move::R);
      if (d == Dir::R) emit(exec(st), Move::U);
      break;
    case LabelKind::Then:
      if (d == Dir::L || d == Dir::R) emit(st, Move::U);
      break;
    case LabelKind::Input:
      if (d == Dir::D && !st.m_out) {
        for (std::uint32_t val = 0; val < num_inputs_vals_; ++val) {
          TwoWayState n = exec(st);
          for (std::size_t j = 0; j < label.vars.size(); ++j)
            n.s = with_bit(n.s, label.vars[j], (val >> j) & 1U);
          n.i = val;
          n.m_out = true;
          emit(n, Move::U);
        }
      }
      break;
    case LabelKind::Output:
      if (d == Dir::D && st.m_out) {
        for (int q2 : spec_.successors(st.q, letter(st.i, st.s, label.vars))) {
          TwoWayState n = st;
          n.q = q2;
          n.m_out = false;
          n.flag = true;
          emit(n, Move::U);
        }
      }
      break;
    case LabelKind::InOut: {
      if (d != Dir::D) break;
      auto read = [&](std::uint32_t s, std::uint32_t val) {
        for (int j = 0; j < vars_.num_inputs; ++j) s = with_bit(s, j, (val >> j) & 1U);
        return s;
      };
      if (!st.m_out) {
        for (std::uint32_t val = 0; val < num_inputs_vals_; ++val) {
          TwoWayState n = exec(st);
          n.s = read(st.s, val);
          n.i = val;
          n.m_out = true;
          emit(n, Move::U);
        }
      } else {
        std::vector<int> outs;
        for (int k = 0; k < vars_.num_outputs; ++k) outs.push_back(vars_.num_inputs + k);
        const auto& succ = spec_.successors(st.q, letter(st.i, st.s, outs));
        for (std::uint32_t val = 0; val < num_inputs_vals_; ++val) {
          for (int q2 : succ) {
            TwoWayState n = st;
            n.s = read(st.s, val);
            n.q = q2;
            n.i = val;
            n.flag = true;
            emit(n, Move::U);
          }
        }
      }
      break;
    }
    default:
      break;
  }
  return out;
}

std::vector<int> TwoWayAutomaton::reachable_states() const {
  std::vector<bool> seen(static_cast<std::size_t>(num_states_), false);
  std::vector<int> order{initial()};
  seen[static_cast<std::size_t>(initial())] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int p = order[k];
    for (const Label& l : alphabet_) {
      for (Dir d : {Dir::D, Dir::L, Dir::R}) {
        for (const auto& tr : delta(p, l, d)) {
          if (!seen[static_cast<std::size_t>(tr.state)]) {
            seen[static_cast<std::size_t>(tr.state)] = true;
            order.push_back(tr.state);
          }
        }
      }
    }
  }
  std::vector<int> out;
  for (int p = 0; p < num_states_; ++p)
    if (seen[static_cast<std::size_t>(p)]) out.push_back(p);
  return out;
}

TwoWayAutomaton build_b(const WordAutomaton& negated_spec, const ProgramVars& vars, IoMode mode) {
  if (negated_spec.acceptance != WordAcceptance::Buchi) throw Error("build_b expects a Buchi word automaton");
  // A missing specification transition would end a path of the program
  // walk early and hide whatever the program does afterwards.
  TwoWayAutomaton b(vars, mode, complete_automaton(negated_spec));
  b.acceptance = TreeAcceptance::Buchi;
  b.accepting.assign(static_cast<std::size_t>(b.num_states()), false);
  for (int p = 0; p < b.num_states(); ++p) {
    const TwoWayState st = b.state(p);
    b.accepting[static_cast<std::size_t>(p)] = !st.expr && st.flag && b.spec().marked[static_cast<std::size_t>(st.q)];
  }
  return b;
}

TwoWayAutomaton complement_to_ucb(const TwoWayAutomaton& b) {
  TwoWayAutomaton ucb = b;
  ucb.acceptance = TreeAcceptance::CoBuchi;
  return ucb;
}

TwoWayAutomaton build_streett_product(const TwoWayAutomaton& ucb) {
  TwoWayAutomaton out = ucb;
  out.acceptance = TreeAcceptance::Streett;
  const auto n = static_cast<std::size_t>(ucb.num_states());
  StreettPair spec_pair{ucb.accepting, std::vector<bool>(n, false)};
  StreettPair reactive{std::vector<bool>(n, true), std::vector<bool>(n, false)};
  for (int p = 0; p < ucb.num_states(); ++p) {
    const TwoWayState st = ucb.state(p);
    reactive.g[static_cast<std::size_t>(p)] = !st.expr && st.flag;
  }
  out.pairs = {std::move(spec_pair), std::move(reactive)};
  return out;
}

TwoWayAutomaton build_specification_automaton(const Ltl& f, const ProgramVars& vars, IoMode mode) {
  const int atoms = vars.num_inputs + vars.num_outputs;
  return build_streett_product(complement_to_ucb(build_b(ltl_to_nba(ltl_unary(LtlOp::Not, f), atoms), vars, mode)));
}

void write_transition_table(const TwoWayAutomaton& a, const std::vector<int>& states, std::ostream& out) {
  for (int p : states) {
    for (const Label& l : a.alphabet()) {
      for (Dir d : {Dir::D, Dir::L, Dir::R}) {
        for (const auto& tr : a.delta(p, l, d)) {
          out << a.state_to_string(p) << ' ' << label_to_string(l, a.vars()) << ' ' << to_string(d) << " -> "
              << a.state_to_string(tr.state) << ' ' << to_string(tr.move) << '\n';
        }
      }
    }
  }
}

namespace {

struct Walker {
  const TwoWayAutomaton& a;
  const ProgramTree& tree;
  std::vector<int> parent;

  Walker(const TwoWayAutomaton& aut, const ProgramTree& t) : a(aut), tree(t), parent(t.parents()) {}

  // Applies `move` at `node`; returns false when it leaves the tree.
  bool apply(int& node, Dir& dir, Move move) const {
    const auto& n = tree.at(node);
    switch (move) {
      case Move::L:
        if (n.left < 0) return false;
        node = n.left;
        dir = Dir::D;
        return true;
      case Move::R:
        if (n.right < 0) return false;
        node = n.right;
        dir = Dir::D;
        return true;
      case Move::RL:
      case Move::RR: {
        if (n.right < 0) return false;
        const auto& mid = tree.at(n.right);
        const int next = move == Move::RL ? mid.left : mid.right;
        if (next < 0) return false;
        node = next;
        dir = Dir::D;
        return true;
      }
      case Move::U: {
        const int up = parent[static_cast<std::size_t>(node)];
        if (up < 0) return false;
        dir = tree.at(up).left == node ? Dir::L : Dir::R;
        node = up;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

Simulation simulate(const TwoWayAutomaton& a, const ProgramTree& tree, const std::vector<std::uint32_t>& inputs,
                    std::uint64_t step_budget) {
  Simulation sim;
  if (inputs.empty()) return sim;
  const Walker w(a, tree);
  int p = a.initial();
  int node = 0;
  Dir dir = Dir::D;
  std::size_t next_input = 0;
  for (std::uint64_t step = 0; step < step_budget; ++step) {
    const Label& label = tree.at(node).label;
    const auto succ = a.delta(p, label, dir);
    if (succ.empty()) {
      sim.stuck = true;
      return sim;
    }
    const TwoWayState st = a.state(p);
    TwoWayTransition chosen = succ.front();
    const bool reads = (label.kind == LabelKind::Input && !st.m_out) || (label.kind == LabelKind::InOut && dir == Dir::D);
    const bool writes = (label.kind == LabelKind::Output || label.kind == LabelKind::InOut) && st.m_out && dir == Dir::D;
    if (writes) {
      std::uint32_t out = 0;
      if (label.kind == LabelKind::Output) {
        for (std::size_t k = 0; k < label.vars.size(); ++k)
          if ((st.s >> label.vars[k]) & 1U) out |= 1U << k;
      } else {
        for (int k = 0; k < a.vars().num_outputs; ++k)
          if ((st.s >> (a.vars().num_inputs + k)) & 1U) out |= 1U << k;
      }
      sim.steps.push_back({st.i, out});
      if (sim.steps.size() == inputs.size()) return sim;
    }
    if (reads) {
      const std::uint32_t want = inputs[next_input++];
      bool found = false;
      for (const auto& tr : succ) {
        if (a.state(tr.state).i == want) {
          chosen = tr;
          found = true;
          break;
        }
      }
      if (!found) {
        sim.stuck = true;
        return sim;
      }
    }
    p = chosen.state;
    if (!w.apply(node, dir, chosen.move)) {
      sim.stuck = true;
      return sim;
    }
  }
  sim.stuck = true;
  return sim;
}

std::optional<bool> evaluate_with_automaton(const TwoWayAutomaton& a, const ProgramTree& tree, int node,
                                            std::uint32_t s) {
  const Walker w(a, tree);
  TwoWayState start;
  start.expr = true;
  start.s = s;
  int p = a.index(start);
  int at = node;
  Dir dir = Dir::D;
  for (int step = 0; step < 100000; ++step) {
    const auto succ = a.delta(p, tree.at(at).label, dir);
    if (succ.size() != 1) return std::nullopt;
    p = succ.front().state;
    if (at == node && succ.front().move == Move::U) return a.state(p).flag;
    if (!w.apply(at, dir, succ.front().move)) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace reactsyn
