#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace reactsyn {

/// Conflict-driven clause-learning SAT solver over DIMACS literals.
///
/// Two-watched-literal propagation, VSIDS branching with phase saving,
/// first-UIP learning with recursive minimization, Luby restarts and
/// LBD-based learnt clause reduction.
class CdclSolver {
 public:
  enum class Result { Sat, Unsat, Unknown };

  explicit CdclSolver(int num_vars = 0);

  void reserve_vars(int num_vars);
  /// Returns false if the formula became trivially unsatisfiable.
  bool add_clause(std::span<const int> lits);

  /// Solves; Unknown is returned only when `deadline` passes.
  Result solve(std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

  /// Value of variable `var` (1-based) in the last model.
  bool model_value(int var) const { return model_[static_cast<std::size_t>(var)]; }
  int num_vars() const { return num_vars_; }

  std::uint64_t conflicts() const { return conflicts_; }
  std::uint64_t decisions() const { return decisions_; }

 private:
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xffffffffU;

  struct Watcher {
    CRef cref;
    std::uint32_t blocker;
  };

  // Clause arena layout: [size][flags: learnt | deleted<<1 | lbd<<2][activity][lits...]
  std::uint32_t& csize(CRef c) { return arena_[c]; }
  std::uint32_t& cflags(CRef c) { return arena_[c + 1]; }
  float cact(CRef c) const { return std::bit_cast<float>(arena_[c + 2]); }
  void set_cact(CRef c, float a) { arena_[c + 2] = std::bit_cast<std::uint32_t>(a); }
  std::uint32_t* clits(CRef c) { return &arena_[c + 3]; }
  bool learnt(CRef c) { return (cflags(c) & 1U) != 0; }
  bool deleted(CRef c) { return (cflags(c) & 2U) != 0; }
  std::uint32_t lbd(CRef c) { return cflags(c) >> 2; }

  static std::uint32_t to_internal(int lit) {
    return lit > 0 ? static_cast<std::uint32_t>(2 * (lit - 1)) : static_cast<std::uint32_t>(2 * (-lit - 1) + 1);
  }
  static std::uint32_t var_of(std::uint32_t l) { return l >> 1; }
  static std::uint32_t neg(std::uint32_t l) { return l ^ 1U; }

  // 0 = false, 1 = true, 2 = unassigned
  std::uint8_t value(std::uint32_t l) const {
    const std::uint8_t v = assigns_[var_of(l)];
    return v == 2 ? 2 : static_cast<std::uint8_t>(v ^ (l & 1U));
  }

  CRef alloc_clause(std::span<const std::uint32_t> lits, bool is_learnt, std::uint32_t lbd_value);
  void attach(CRef c);
  void enqueue(std::uint32_t lit, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<std::uint32_t>& out_learnt, int& out_level);
  bool lit_redundant(std::uint32_t lit, std::uint32_t abstract_levels);
  std::uint32_t abstract_level(std::uint32_t var) const { return 1U << (level_[var] & 31); }
  void backtrack(int level);
  std::uint32_t pick_branch();
  void bump_var(std::uint32_t var);
  void bump_clause(CRef c);
  void reduce_db();
  void collect_garbage();
  std::uint32_t compute_lbd(std::span<const std::uint32_t> lits);

  void heap_insert(std::uint32_t var);
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  std::uint32_t heap_pop();
  bool heap_contains(std::uint32_t var) const { return heap_index_[var] >= 0; }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int num_vars_ = 0;
  bool ok_ = true;
  std::vector<std::uint32_t> arena_;
  std::vector<CRef> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::uint8_t> assigns_;
  std::vector<std::uint8_t> polarity_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_index_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint32_t> analyze_stack_;
  std::vector<std::uint32_t> analyze_toclear_;
  std::vector<std::uint32_t> lbd_stamp_;
  std::uint32_t lbd_counter_ = 0;
  std::size_t wasted_ = 0;
  std::vector<bool> model_;
  std::uint64_t conflicts_ = 0;
  std::uint64_t decisions_ = 0;
};

}  // namespace reactsyn
