#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>

#include "reactsyn/encoding.hpp"
#include "reactsyn/error.hpp"

namespace reactsyn {

namespace {

struct Outcome {
  Move move;
  std::uint32_t values;
  bool r;
};

// One deterministic simulation step at a node labelled `l`, entered from
// `d`, with last expression result `r`. `values` holds the non-input
// variables, `input` the inputs read at the start of the segment.
std::optional<Outcome> step(const Label& l, Dir d, bool r, std::uint32_t values, std::uint32_t input,
                            const ProgramVars& vars) {
  const int ni = vars.num_inputs;
  auto value = [&](int x) {
    return x < ni ? ((input >> x) & 1U) != 0 : ((values >> (x - ni)) & 1U) != 0;
  };
  switch (l.kind) {
    case LabelKind::True:
    case LabelKind::False:
    case LabelKind::Var:
      if (d != Dir::D) return std::nullopt;
      return Outcome{Move::U, values, l.kind == LabelKind::True || (l.kind == LabelKind::Var && value(l.var))};
    case LabelKind::Or:
      if (d == Dir::D) return Outcome{Move::L, values, false};
      if (d == Dir::L) return r ? Outcome{Move::U, values, true} : Outcome{Move::R, values, false};
      return Outcome{Move::U, values, r};
    case LabelKind::Not:
      if (d == Dir::D) return Outcome{Move::L, values, false};
      if (d == Dir::L) return Outcome{Move::U, values, !r};
      return std::nullopt;
    case LabelKind::Skip:
    case LabelKind::InOut:
      if (d != Dir::D) return std::nullopt;
      return Outcome{Move::U, values, false};
    case LabelKind::Assign: {
      if (d == Dir::D) return Outcome{Move::L, values, false};
      if (d != Dir::L) return std::nullopt;
      if (l.var < ni) throw Error("direct encoding: assignment to an input variable");
      const std::uint32_t bit = 1U << (l.var - ni);
      return Outcome{Move::U, r ? (values | bit) : (values & ~bit), false};
    }
    case LabelKind::Seq:
      if (d == Dir::D) return Outcome{Move::L, values, false};
      if (d == Dir::L) return Outcome{Move::R, values, false};
      return Outcome{Move::U, values, false};
    case LabelKind::If:
      if (d == Dir::D) return Outcome{Move::L, values, false};
      if (d == Dir::L) return Outcome{r ? Move::RL : Move::RR, values, false};
      return Outcome{Move::U, values, false};
    case LabelKind::Then:
      if (d == Dir::D) return std::nullopt;
      return Outcome{Move::U, values, false};
    case LabelKind::While:
      if (d == Dir::L) return Outcome{r ? Move::R : Move::U, values, false};
      return Outcome{Move::L, values, false};
    case LabelKind::Input:
    case LabelKind::Output:
      throw Error("direct encoding requires the InOut program alphabet");
  }
  return std::nullopt;
}

struct Valuation {
  int t;
  std::uint32_t values;
  Dir d;
  bool r;
};

}  // namespace

MealyMachine ExtractedStructure::to_mealy() const {
  MealyMachine m;
  m.num_inputs = num_inputs;
  m.num_outputs = 0;
  m.initial = initial;
  const std::uint32_t letters = 1U << num_inputs;
  for (int s = 0; s < num_states(); ++s) {
    std::vector<int> nx;
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < letters; ++i) {
      const int t = next[static_cast<std::size_t>(s)][i];
      nx.push_back(t);
      out.push_back(states[static_cast<std::size_t>(t)].output);
    }
    m.next.push_back(std::move(nx));
    m.out.push_back(std::move(out));
  }
  return m;
}

void write_structure(const ExtractedStructure& s, std::ostream& out) {
  out << "initial " << s.initial << "\n";
  for (int k = 0; k < s.num_states(); ++k) {
    const auto& st = s.states[static_cast<std::size_t>(k)];
    out << "state " << k << " node " << st.node << " values " << st.values << " output " << st.output << "\n";
  }
  for (int k = 0; k < s.num_states(); ++k)
    for (std::size_t i = 0; i < s.next[static_cast<std::size_t>(k)].size(); ++i)
      out << k << " " << i << " -> " << s.next[static_cast<std::size_t>(k)][i] << "\n";
}

DirectInstance encode_direct(const WordAutomaton& ucb, const ProgramVars& vars, int nodes,
                             std::optional<int> structure_bound) {
  if (ucb.acceptance != WordAcceptance::CoBuchi) throw Error("direct encoding expects a universal co-Buechi automaton");
  if (ucb.num_atoms != vars.num_inputs + vars.num_outputs)
    throw Error("specification automaton does not match the variable layout");
  if (structure_bound && *structure_bound < 1) throw Error("structure bound must be at least 1");
  if (vars.num_vars() - vars.num_inputs > 16 || vars.num_inputs > 8) throw Error("too many variables");

  ConstraintSystem cs0;
  TreeEncoding tree(cs0, vars, program_alphabet(vars, IoMode::InOut), nodes);
  DirectInstance inst{std::move(cs0), std::move(tree)};
  ConstraintSystem& cs = inst.cs;
  const TreeEncoding& tr = inst.tree;

  const int ni = vars.num_inputs;
  const int no = vars.num_outputs;
  const int kb = vars.num_vars() - ni;
  const std::uint32_t num_values = 1U << kb;
  const std::uint32_t num_in = 1U << ni;
  const int n = nodes;
  const int k = tr.num_labels();
  inst.value_bits = kb;
  inst.num_valuations = n * static_cast<int>(num_values) * 6;
  inst.structure_capacity = n * static_cast<int>(num_values);
  inst.spec_states = ucb.num_states();

  Label inout_label;
  inout_label.kind = LabelKind::InOut;
  const int inout = tr.label_index(inout_label);
  auto inout_at = [&](int t) { return inout < 0 ? 0 : tr.label(t, inout); };

  const unsigned sc_width = bits_for(static_cast<std::uint64_t>(inst.structure_capacity - 1));
  const unsigned rank_width = bits_for(static_cast<std::uint64_t>(inst.num_valuations));
  auto encode_state = [&](int t, std::uint32_t values) {
    return static_cast<std::uint64_t>(t) * num_values + values;
  };

  // Per (valuation, input): reachability, shortcut target and rank.
  struct Slot {
    Valuation v;
    std::uint32_t input;
    Lit reach;
    BitVec sc;
    BitVec rank;
  };
  std::vector<Slot> slots;
  std::unordered_map<std::uint64_t, int> slot_id;
  auto slot = [&](Valuation v, std::uint32_t input) {
    const std::uint64_t key =
        ((((static_cast<std::uint64_t>(v.t) * num_values + v.values) * 3 + static_cast<std::uint64_t>(v.d)) * 2 +
          (v.r ? 1 : 0)) *
         num_in) +
        input;
    const auto [it, fresh] = slot_id.try_emplace(key, static_cast<int>(slots.size()));
    if (fresh) {
      const std::string tag = "[" + std::to_string(v.t) + "," + std::to_string(v.values) + "," + to_string(v.d) +
                              "," + std::to_string(v.r ? 1 : 0) + "," + std::to_string(input) + "]";
      slots.push_back(Slot{v, input, cs.new_named("sim" + tag), cs.alloc_bitvec("shortcut" + tag, sc_width),
                           cs.alloc_bitvec("rank" + tag, rank_width)});
      if (inst.structure_capacity - 1 < (1 << sc_width) - 1)
        cs.assert_leq_const(slots.back().sc, static_cast<std::uint64_t>(inst.structure_capacity - 1));
    }
    return it->second;
  };

  // Structure states: InOut nodes with their non-input values.
  std::vector<int> structure_nodes;
  for (int t = 1; t < n; ++t)
    if (inout_at(t) != 0) structure_nodes.push_back(t);
  inst.structure_reach.assign(static_cast<std::size_t>(inst.structure_capacity), 0);
  inst.shortcut.assign(static_cast<std::size_t>(inst.structure_capacity), {});
  std::vector<Lit> all_reach;
  for (int t : structure_nodes) {
    for (std::uint32_t s = 0; s < num_values; ++s) {
      const auto w = static_cast<std::size_t>(encode_state(t, s));
      const Lit rs = cs.new_named("state[" + std::to_string(t) + "," + std::to_string(s) + "]");
      inst.structure_reach[w] = rs;
      all_reach.push_back(rs);
      cs.add_clause({-rs, inout_at(t)});
      for (std::uint32_t i = 0; i < num_in; ++i) {
        const int id = slot(Valuation{t, s, Dir::D, false}, i);
        cs.add_clause({-rs, slots[static_cast<std::size_t>(id)].reach});
        inst.shortcut[w].push_back(slots[static_cast<std::size_t>(id)].sc);
      }
    }
  }
  if (structure_bound && !all_reach.empty()) cs.at_most_k(all_reach, static_cast<unsigned>(*structure_bound));

  const int initial_slot = slot(Valuation{0, 0, Dir::D, false}, 0);
  cs.add_clause({slots[static_cast<std::size_t>(initial_slot)].reach});

  // Simulation steps, explored from the segment starts.
  std::vector<Lit> clause;
  for (std::size_t next = 0; next < slots.size(); ++next) {
    const Valuation v = slots[next].v;
    const std::uint32_t input = slots[next].input;
    const Lit rv = slots[next].reach;
    std::unordered_map<std::uint64_t, Lit> edges;
    std::vector<std::pair<Valuation, Lit>> targets;
    for (int sigma = 0; sigma < k; ++sigma) {
      const Lit x = tr.label(v.t, sigma);
      if (x == 0) continue;
      const auto out = step(tr.alphabet()[static_cast<std::size_t>(sigma)], v.d, v.r, v.values, input, vars);
      const auto places = out ? tr.targets(v.t, out->move) : std::vector<Placement>{};
      if (places.empty()) {
        cs.add_clause({-rv, -x});
        continue;
      }
      for (const Placement& pl : places) {
        const Valuation w{pl.node, out->values, pl.dir, pl.dir == Dir::D ? false : out->r};
        const std::uint64_t key =
            ((static_cast<std::uint64_t>(w.t) * num_values + w.values) * 3 + static_cast<std::uint64_t>(w.d)) * 2 +
            (w.r ? 1 : 0);
        auto [it, fresh] = edges.try_emplace(key, 0);
        if (fresh) {
          it->second = cs.new_var();
          targets.emplace_back(w, it->second);
        }
        clause.assign({-rv, -x});
        for (Lit g : pl.guard) clause.push_back(-g);
        clause.push_back(it->second);
        cs.add_clause(clause);
      }
    }
    for (const auto& [w, e] : targets) {
      const Lit io = w.d == Dir::D ? inout_at(w.t) : 0;
      if (io != 0) {
        // The next InOut point is the shortcut target.
        const Lit stop[] = {e, io};
        cs.assert_equals_const(slots[next].sc, encode_state(w.t, w.values), stop);
      }
      const Lit go_on[] = {e, -io};
      const std::span<const Lit> guard = io != 0 ? std::span<const Lit>(go_on, 2) : std::span<const Lit>(go_on, 1);
      const int succ = slot(w, input);
      const Slot& a = slots[next];
      const Slot& b = slots[static_cast<std::size_t>(succ)];
      clause.assign(guard.begin(), guard.end());
      for (Lit& l : clause) l = -l;
      clause.push_back(b.reach);
      cs.add_clause(clause);
      cs.assert_compare(a.sc, b.sc, CompareOp::Equal, guard);
      if (static_cast<std::size_t>(succ) == next) {
        clause.pop_back();
        cs.add_clause(clause);
      } else {
        cs.assert_compare(a.rank, b.rank, CompareOp::Greater, guard);
      }
    }
  }
  inst.initial_shortcut = slots[static_cast<std::size_t>(initial_slot)].sc;

  // Structure transitions E[w][i][w'] and the run graph of the
  // specification automaton over the structure.
  const int nq = ucb.num_states();
  std::vector<int> states;
  for (int t : structure_nodes)
    for (std::uint32_t s = 0; s < num_values; ++s) states.push_back(static_cast<int>(encode_state(t, s)));
  const std::uint64_t bound = static_cast<std::uint64_t>(nq) * states.size();
  const unsigned ann_width = bits_for(bound);
  std::vector<std::vector<Lit>> rg(static_cast<std::size_t>(nq), std::vector<Lit>(static_cast<std::size_t>(inst.structure_capacity), 0));
  std::vector<std::vector<BitVec>> ann(static_cast<std::size_t>(nq), std::vector<BitVec>(static_cast<std::size_t>(inst.structure_capacity)));
  for (int q = 0; q < nq; ++q) {
    for (int w : states) {
      const std::string tag = "[" + std::to_string(q) + "," + std::to_string(w) + "]";
      rg[static_cast<std::size_t>(q)][static_cast<std::size_t>(w)] = cs.new_named("rg" + tag);
      ann[static_cast<std::size_t>(q)][static_cast<std::size_t>(w)] = cs.alloc_bitvec("lambda" + tag, ann_width);
      if (bound < (std::uint64_t{1} << ann_width) - 1)
        cs.assert_leq_const(ann[static_cast<std::size_t>(q)][static_cast<std::size_t>(w)], bound);
    }
  }
  auto output_of = [&](int w) { return (static_cast<std::uint32_t>(w) % num_values) & ((1U << no) - 1); };

  for (int w : states) {
    const Lit first = cs.equals_const_lit(inst.initial_shortcut, static_cast<std::uint64_t>(w));
    cs.add_clause({-first, inst.structure_reach[static_cast<std::size_t>(w)]});
    cs.add_clause({-first, rg[static_cast<std::size_t>(ucb.initial)][static_cast<std::size_t>(w)]});
  }

  std::unordered_map<std::uint64_t, Lit> rg_edges;
  auto rg_edge = [&](int q, int w, int q2, int w2) {
    const std::uint64_t key =
        ((static_cast<std::uint64_t>(q) * inst.structure_capacity + w) * nq + q2) * inst.structure_capacity + w2;
    auto [it, fresh] = rg_edges.try_emplace(key, 0);
    if (fresh) {
      const Lit e = cs.new_var();
      it->second = e;
      const Lit to = rg[static_cast<std::size_t>(q2)][static_cast<std::size_t>(w2)];
      cs.add_clause({-e, to});
      const bool strict = ucb.marked[static_cast<std::size_t>(q)];
      if (q == q2 && w == w2) {
        if (strict) cs.add_clause({-e});
      } else {
        const Lit g[] = {e};
        cs.assert_compare(ann[static_cast<std::size_t>(q)][static_cast<std::size_t>(w)],
                          ann[static_cast<std::size_t>(q2)][static_cast<std::size_t>(w2)],
                          strict ? CompareOp::Greater : CompareOp::GreaterEqual, g);
      }
    }
    return it->second;
  };

  for (int w : states) {
    const Lit rs = inst.structure_reach[static_cast<std::size_t>(w)];
    for (std::uint32_t i = 0; i < num_in; ++i) {
      const BitVec& sc = inst.shortcut[static_cast<std::size_t>(w)][i];
      for (int w2 : states) {
        const Lit move = cs.equals_const_lit(sc, static_cast<std::uint64_t>(w2));
        cs.add_clause({-rs, -move, inst.structure_reach[static_cast<std::size_t>(w2)]});
        const Letter letter = i | (output_of(w2) << ni);
        for (int q = 0; q < nq; ++q) {
          for (int q2 : ucb.successors(q, letter)) {
            const Lit e = rg_edge(q, w, q2, w2);
            cs.add_clause({-rg[static_cast<std::size_t>(q)][static_cast<std::size_t>(w)], -move, e});
          }
        }
      }
    }
  }
  return inst;
}

ProgramTree decode_direct(const DirectInstance& inst, const Model& m) { return inst.tree.decode(m); }

ExtractedStructure decode_structure(const DirectInstance& inst, const Model& m) {
  ExtractedStructure s;
  const ProgramVars& vars = inst.tree.vars();
  s.num_inputs = vars.num_inputs;
  const std::uint32_t num_values = 1U << inst.value_bits;
  const std::uint32_t out_mask = (1U << vars.num_outputs) - 1;
  std::unordered_map<std::uint64_t, int> index;
  std::vector<std::uint64_t> order;
  auto visit = [&](std::uint64_t w) {
    if (w >= inst.shortcut.size() || inst.shortcut[w].empty())
      throw Error("model points to a non-InOut structure state");
    const auto [it, fresh] = index.try_emplace(w, static_cast<int>(order.size()));
    if (fresh) order.push_back(w);
    return it->second;
  };
  s.initial = visit(m.value(inst.initial_shortcut));
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::uint64_t w = order[k];
    std::vector<int> nx;
    for (const BitVec& sc : inst.shortcut[w]) nx.push_back(visit(m.value(sc)));
    s.next.push_back(std::move(nx));
  }
  for (std::uint64_t w : order) {
    const auto values = static_cast<std::uint32_t>(w % num_values);
    s.states.push_back({static_cast<int>(w / num_values), values, values & out_mask});
  }
  return s;
}

}  // namespace reactsyn
