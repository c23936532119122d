#include "reactsyn/word_automaton.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "reactsyn/error.hpp"
#include "reactsyn/scc.hpp"

namespace reactsyn {

void WordAutomaton::validate() const {
  if (num_atoms < 0 || num_atoms > 16) throw Error("automaton: unsupported atom count");
  if (delta.empty()) throw Error("automaton: no states");
  if (initial < 0 || initial >= num_states()) throw Error("automaton: initial state out of range");
  if (marked.size() != delta.size()) throw Error("automaton: accepting set size mismatch");
  for (const auto& row : delta) {
    if (row.size() != num_letters()) throw Error("automaton: transition table is not total");
    for (const auto& succ : row)
      for (int q : succ)
        if (q < 0 || q >= num_states()) throw Error("automaton: successor out of range");
  }
}

namespace {

// Hash-consed NNF subformulas.
struct FormulaTable {
  struct Entry {
    LtlOp op;
    int atom;
    int lhs;
    int rhs;
  };
  std::vector<Entry> entries;
  std::map<std::tuple<int, int, int, int>, int> index;

  int intern(const Ltl& f) {
    const int l = f->lhs ? intern(f->lhs) : -1;
    const int r = f->rhs ? intern(f->rhs) : -1;
    const auto key = std::make_tuple(static_cast<int>(f->op), f->atom, l, r);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(entries.size());
    entries.push_back({f->op, f->atom, l, r});
    index.emplace(key, id);
    return id;
  }
  const Entry& at(int id) const { return entries[static_cast<std::size_t>(id)]; }
};

struct TableauNode {
  std::set<int> incoming;  // -1 denotes the initial pseudo node
  std::set<int> pending;
  std::set<int> old;
  std::set<int> next;
};

class Tableau {
 public:
  explicit Tableau(FormulaTable& table) : table_(table) {}

  std::vector<TableauNode> build(int root) {
    TableauNode start;
    start.incoming.insert(-1);
    start.pending.insert(root);
    expand(std::move(start));
    return nodes_;
  }

 private:
  bool contradicts(int f, const std::set<int>& old) const {
    const auto& e = table_.at(f);
    if (e.op == LtlOp::False) return true;
    for (int g : old) {
      const auto& o = table_.at(g);
      if (e.op == LtlOp::Atom && o.op == LtlOp::Not && table_.at(o.lhs).atom == e.atom) return true;
      if (e.op == LtlOp::Not && o.op == LtlOp::Atom && o.atom == table_.at(e.lhs).atom) return true;
    }
    return false;
  }

  void expand(TableauNode node) {
    if (node.pending.empty()) {
      for (auto& existing : nodes_) {
        if (existing.old == node.old && existing.next == node.next) {
          existing.incoming.insert(node.incoming.begin(), node.incoming.end());
          return;
        }
      }
      const int id = static_cast<int>(nodes_.size());
      nodes_.push_back(node);
      TableauNode succ;
      succ.incoming.insert(id);
      succ.pending = node.next;
      expand(std::move(succ));
      return;
    }
    const int f = *node.pending.begin();
    node.pending.erase(node.pending.begin());
    if (node.old.count(f) != 0) {
      expand(std::move(node));
      return;
    }
    const auto e = table_.at(f);
    switch (e.op) {
      case LtlOp::True:
      case LtlOp::False:
      case LtlOp::Atom:
      case LtlOp::Not:
        if (contradicts(f, node.old)) return;
        node.old.insert(f);
        expand(std::move(node));
        return;
      case LtlOp::And:
        node.old.insert(f);
        for (int g : {e.lhs, e.rhs})
          if (node.old.count(g) == 0) node.pending.insert(g);
        expand(std::move(node));
        return;
      case LtlOp::Next:
        node.old.insert(f);
        node.next.insert(e.lhs);
        expand(std::move(node));
        return;
      case LtlOp::Or:
      case LtlOp::Until:
      case LtlOp::Release: {
        TableauNode first = node;
        TableauNode second = std::move(node);
        first.old.insert(f);
        second.old.insert(f);
        auto add = [](TableauNode& n, int g) {
          if (n.old.count(g) == 0) n.pending.insert(g);
        };
        if (e.op == LtlOp::Or) {
          add(first, e.lhs);
          add(second, e.rhs);
        } else if (e.op == LtlOp::Until) {
          add(first, e.lhs);
          first.next.insert(f);
          add(second, e.rhs);
        } else {
          add(first, e.rhs);
          first.next.insert(f);
          add(second, e.lhs);
          add(second, e.rhs);
        }
        expand(std::move(first));
        expand(std::move(second));
        return;
      }
      default:
        throw Error("tableau: formula not in negation normal form");
    }
  }

  FormulaTable& table_;
  std::vector<TableauNode> nodes_;
};

// Removes states that cannot reach an accepting cycle, keeping the initial
// state, and renumbers.
WordAutomaton trim(const WordAutomaton& a) {
  const int n = a.num_states();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    std::set<int> s;
    for (const auto& row : a.delta[static_cast<std::size_t>(q)]) s.insert(row.begin(), row.end());
    succ[static_cast<std::size_t>(q)].assign(s.begin(), s.end());
  }
  const auto scc = strongly_connected_components(succ);
  // good[c]: component c reaches a cyclic component containing a marked state.
  std::vector<bool> good(static_cast<std::size_t>(scc.count), false);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(scc.count));
  for (int q = 0; q < n; ++q) members[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(q)])].push_back(q);
  for (int c = 0; c < scc.count; ++c) {
    bool g = false;
    if (scc.cyclic[static_cast<std::size_t>(c)]) {
      for (int q : members[static_cast<std::size_t>(c)])
        if (a.marked[static_cast<std::size_t>(q)]) g = true;
    }
    for (int q : members[static_cast<std::size_t>(c)])
      for (int w : succ[static_cast<std::size_t>(q)])
        if (good[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(w)])]) g = true;
    good[static_cast<std::size_t>(c)] = g;
  }
  auto alive = [&](int q) { return good[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(q)])]; };
  const auto reach = reachable_from(succ, a.initial);

  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  WordAutomaton out;
  out.num_atoms = a.num_atoms;
  out.acceptance = a.acceptance;
  int next = 0;
  for (int q = 0; q < n; ++q) {
    if (q == a.initial || (alive(q) && reach[static_cast<std::size_t>(q)])) remap[static_cast<std::size_t>(q)] = next++;
  }
  out.delta.assign(static_cast<std::size_t>(next), std::vector<std::vector<int>>(a.num_letters()));
  out.marked.assign(static_cast<std::size_t>(next), false);
  for (int q = 0; q < n; ++q) {
    const int nq = remap[static_cast<std::size_t>(q)];
    if (nq < 0) continue;
    out.marked[static_cast<std::size_t>(nq)] = a.marked[static_cast<std::size_t>(q)] && alive(q);
    for (Letter l = 0; l < a.num_letters(); ++l) {
      for (int w : a.delta[static_cast<std::size_t>(q)][l]) {
        const int nw = remap[static_cast<std::size_t>(w)];
        if (nw >= 0 && alive(w)) out.delta[static_cast<std::size_t>(nq)][l].push_back(nw);
      }
    }
  }
  out.initial = remap[static_cast<std::size_t>(a.initial)];
  return out;
}

// Quotient by the coarsest forward bisimulation that respects marking.
WordAutomaton quotient(const WordAutomaton& a) {
  const int n = a.num_states();
  std::vector<int> block(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) block[static_cast<std::size_t>(q)] = a.marked[static_cast<std::size_t>(q)] ? 1 : 0;
  int num_blocks = 0;
  for (;;) {
    std::map<std::vector<int>, int> signature_ids;
    std::vector<int> refined(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      std::vector<int> sig{block[static_cast<std::size_t>(q)]};
      for (Letter l = 0; l < a.num_letters(); ++l) {
        std::set<int> blocks;
        for (int w : a.delta[static_cast<std::size_t>(q)][l]) blocks.insert(block[static_cast<std::size_t>(w)]);
        sig.push_back(-1);
        sig.insert(sig.end(), blocks.begin(), blocks.end());
      }
      auto it = signature_ids.emplace(sig, static_cast<int>(signature_ids.size())).first;
      refined[static_cast<std::size_t>(q)] = it->second;
    }
    const int count = static_cast<int>(signature_ids.size());
    block = refined;
    if (count == num_blocks) break;
    num_blocks = count;
  }
  // Number blocks in order of first occurrence, initial first.
  std::vector<int> order(static_cast<std::size_t>(num_blocks), -1);
  int next = 0;
  order[static_cast<std::size_t>(block[static_cast<std::size_t>(a.initial)])] = next++;
  for (int q = 0; q < n; ++q) {
    auto& o = order[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])];
    if (o < 0) o = next++;
  }
  WordAutomaton out;
  out.num_atoms = a.num_atoms;
  out.acceptance = a.acceptance;
  out.initial = 0;
  out.delta.assign(static_cast<std::size_t>(next), std::vector<std::vector<int>>(a.num_letters()));
  out.marked.assign(static_cast<std::size_t>(next), false);
  std::vector<bool> done(static_cast<std::size_t>(next), false);
  for (int q = 0; q < n; ++q) {
    const int b = order[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])];
    if (done[static_cast<std::size_t>(b)]) continue;
    done[static_cast<std::size_t>(b)] = true;
    out.marked[static_cast<std::size_t>(b)] = a.marked[static_cast<std::size_t>(q)];
    for (Letter l = 0; l < a.num_letters(); ++l) {
      std::set<int> s;
      for (int w : a.delta[static_cast<std::size_t>(q)][l]) s.insert(order[static_cast<std::size_t>(block[static_cast<std::size_t>(w)])]);
      out.delta[static_cast<std::size_t>(b)][l].assign(s.begin(), s.end());
    }
  }
  return out;
}

}  // namespace

WordAutomaton ltl_to_nba(const Ltl& f, int num_atoms) {
  if (num_atoms < 0 || num_atoms > 16) throw Error("ltl_to_nba: unsupported atom count");
  FormulaTable table;
  const int root = table.intern(to_nnf(f));
  const std::vector<TableauNode> nodes = Tableau(table).build(root);

  // Letter constraints of each node and generalized acceptance sets.
  const Letter letters = Letter{1} << num_atoms;
  std::vector<std::vector<bool>> admits(nodes.size(), std::vector<bool>(letters, true));
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Letter pos = 0;
    Letter neg = 0;
    for (int g : nodes[k].old) {
      const auto& e = table.at(g);
      if (e.op == LtlOp::Atom) pos |= Letter{1} << e.atom;
      if (e.op == LtlOp::Not) neg |= Letter{1} << table.at(e.lhs).atom;
    }
    for (Letter l = 0; l < letters; ++l) admits[k][l] = (l & pos) == pos && (l & neg) == 0;
  }
  std::vector<int> untils;
  for (int id = 0; id < static_cast<int>(table.entries.size()); ++id)
    if (table.at(id).op == LtlOp::Until) untils.push_back(id);
  const int k = static_cast<int>(untils.size());
  auto in_set = [&](std::size_t node, int j) {
    const int u = untils[static_cast<std::size_t>(j)];
    return nodes[node].old.count(u) == 0 || nodes[node].old.count(table.at(u).rhs) != 0;
  };

  // Successor lists over the tableau graph; index nodes.size() is the initial pseudo node.
  const std::size_t init = nodes.size();
  std::vector<std::vector<std::size_t>> out_edges(nodes.size() + 1);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    for (int src : nodes[t].incoming) out_edges[src < 0 ? init : static_cast<std::size_t>(src)].push_back(t);
  }

  // Degeneralize with a counter in [0, k]; counter k marks acceptance.
  std::map<std::pair<std::size_t, int>, int> ids;
  std::vector<std::pair<std::size_t, int>> states;
  auto id_of = [&](std::size_t node, int c) {
    auto it = ids.find({node, c});
    if (it != ids.end()) return it->second;
    const int id = static_cast<int>(states.size());
    ids.emplace(std::make_pair(node, c), id);
    states.push_back({node, c});
    return id;
  };
  WordAutomaton nba;
  nba.num_atoms = num_atoms;
  nba.acceptance = WordAcceptance::Buchi;
  nba.initial = id_of(init, 0);
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    const auto [node, counter] = states[cur];
    std::vector<std::vector<int>> row(letters);
    const int base = counter == k ? 0 : counter;
    for (std::size_t t : out_edges[node]) {
      int c = base;
      while (c < k && in_set(t, c)) ++c;
      const int target = id_of(t, c);
      for (Letter l = 0; l < letters; ++l)
        if (admits[t][l]) row[l].push_back(target);
    }
    nba.delta.push_back(std::move(row));
  }
  nba.marked.assign(states.size(), false);
  for (std::size_t s = 0; s < states.size(); ++s) nba.marked[s] = states[s].second == k;
  for (auto& row : nba.delta)
    for (auto& succ : row) {
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
  return quotient(trim(nba));
}

WordAutomaton negate_and_dualize(const Ltl& f, int num_atoms) {
  WordAutomaton a = ltl_to_nba(ltl_unary(LtlOp::Not, f), num_atoms);
  a.acceptance = WordAcceptance::CoBuchi;
  return a;
}

WordAutomaton complete_automaton(const WordAutomaton& a) {
  bool total = true;
  for (const auto& row : a.delta)
    for (const auto& succ : row) total = total && !succ.empty();
  if (total) return a;
  WordAutomaton out = a;
  const int sink = a.num_states();
  out.marked.push_back(false);
  out.delta.emplace_back(a.num_letters(), std::vector<int>{sink});
  for (auto& row : out.delta)
    for (auto& succ : row)
      if (succ.empty()) succ.push_back(sink);
  return out;
}

bool accepts_lasso(const WordAutomaton& a, const std::vector<Letter>& stem, const std::vector<Letter>& loop) {
  if (loop.empty()) throw Error("accepts_lasso: empty loop");
  const int positions = static_cast<int>(stem.size() + loop.size());
  auto letter_at = [&](int p) {
    return p < static_cast<int>(stem.size()) ? stem[static_cast<std::size_t>(p)]
                                            : loop[static_cast<std::size_t>(p) - stem.size()];
  };
  auto next_pos = [&](int p) { return p + 1 < positions ? p + 1 : static_cast<int>(stem.size()); };
  const int n = a.num_states();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n * positions));
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < positions; ++p) {
      auto& out = succ[static_cast<std::size_t>(q * positions + p)];
      for (int w : a.successors(q, letter_at(p))) out.push_back(w * positions + next_pos(p));
    }
  }
  const auto reach = reachable_from(succ, a.initial * positions);
  const auto scc = strongly_connected_components(succ);
  bool accepting_cycle = false;
  for (int v = 0; v < n * positions; ++v) {
    if (!reach[static_cast<std::size_t>(v)] || !a.marked[static_cast<std::size_t>(v / positions)]) continue;
    if (scc.cyclic[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(v)])]) accepting_cycle = true;
  }
  return a.acceptance == WordAcceptance::Buchi ? accepting_cycle : !accepting_cycle;
}

void write_automaton(const WordAutomaton& a, std::ostream& out) {
  out << "states: " << a.num_states() << '\n';
  out << "initial: " << a.initial << '\n';
  out << "acceptance: " << (a.acceptance == WordAcceptance::Buchi ? "buchi" : "cobuchi") << '\n';
  out << "accepting:";
  for (int q = 0; q < a.num_states(); ++q)
    if (a.marked[static_cast<std::size_t>(q)]) out << ' ' << q;
  out << '\n';
  out << "atoms: " << a.num_atoms << '\n';
  for (int q = 0; q < a.num_states(); ++q)
    for (Letter l = 0; l < a.num_letters(); ++l)
      for (int w : a.successors(q, l)) out << q << ' ' << l << ' ' << w << '\n';
}

WordAutomaton read_automaton(std::istream& in) {
  WordAutomaton a;
  int states = -1;
  int atoms = -1;
  std::vector<int> accepting;
  std::vector<std::tuple<int, Letter, int>> edges;
  bool have_acceptance = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "states:") {
      ls >> states;
    } else if (head == "initial:") {
      ls >> a.initial;
    } else if (head == "acceptance:") {
      std::string kind;
      ls >> kind;
      if (kind == "buchi") a.acceptance = WordAcceptance::Buchi;
      else if (kind == "cobuchi") a.acceptance = WordAcceptance::CoBuchi;
      else throw ParseError("unknown acceptance '" + kind + "'", line_no, 1);
      have_acceptance = true;
    } else if (head == "accepting:") {
      int q = 0;
      while (ls >> q) accepting.push_back(q);
    } else if (head == "atoms:") {
      ls >> atoms;
    } else {
      std::istringstream es(line);
      long long src = -1, letter = -1, dst = -1;
      if (!(es >> src >> letter >> dst)) throw ParseError("malformed transition line", line_no, 1);
      edges.emplace_back(static_cast<int>(src), static_cast<Letter>(letter), static_cast<int>(dst));
      continue;
    }
    if (ls.fail() && !ls.eof()) throw ParseError("malformed header line", line_no, 1);
  }
  if (states <= 0 || atoms < 0 || !have_acceptance) throw ParseError("incomplete automaton header", line_no, 1);
  a.num_atoms = atoms;
  a.delta.assign(static_cast<std::size_t>(states), std::vector<std::vector<int>>(Letter{1} << atoms));
  a.marked.assign(static_cast<std::size_t>(states), false);
  for (int q : accepting) {
    if (q < 0 || q >= states) throw ParseError("accepting state out of range", line_no, 1);
    a.marked[static_cast<std::size_t>(q)] = true;
  }
  for (const auto& [src, letter, dst] : edges) {
    if (src < 0 || src >= states || dst < 0 || dst >= states || letter >= a.num_letters()) {
      throw ParseError("transition out of range", line_no, 1);
    }
    auto& succ = a.delta[static_cast<std::size_t>(src)][letter];
    if (std::find(succ.begin(), succ.end(), dst) == succ.end()) succ.push_back(dst);
  }
  a.validate();
  return a;
}

}  // namespace reactsyn
