#include "reactsyn/cdcl.hpp"

#include <algorithm>

namespace reactsyn {

namespace {

double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double result = 1.0;
  for (int i = 0; i < seq; ++i) result *= y;
  return result;
}

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;

}  // namespace

CdclSolver::CdclSolver(int num_vars) { reserve_vars(num_vars); }

void CdclSolver::reserve_vars(int num_vars) {
  if (num_vars <= num_vars_) return;
  const auto n = static_cast<std::size_t>(num_vars);
  watches_.resize(2 * n);
  assigns_.resize(n, 2);
  polarity_.resize(n, 1);
  level_.resize(n, 0);
  reason_.resize(n, kNoReason);
  activity_.resize(n, 0.0);
  heap_index_.resize(n, -1);
  seen_.resize(n, 0);
  for (int v = num_vars_; v < num_vars; ++v) heap_insert(static_cast<std::uint32_t>(v));
  num_vars_ = num_vars;
}

bool CdclSolver::add_clause(std::span<const int> lits) {
  if (!ok_) return false;
  int max_var = 0;
  for (int l : lits) max_var = std::max(max_var, l < 0 ? -l : l);
  reserve_vars(max_var);

  std::vector<std::uint32_t> c;
  c.reserve(lits.size());
  for (int l : lits) c.push_back(to_internal(l));
  std::sort(c.begin(), c.end());
  std::vector<std::uint32_t> out;
  std::uint32_t prev = 0xffffffffU;
  for (std::uint32_t l : c) {
    if (l == prev) continue;
    if (prev != 0xffffffffU && l == neg(prev)) return true;  // tautology
    const std::uint8_t v = value(l);
    if (v == 1 && level_[var_of(l)] == 0) return true;
    if (v == 0 && level_[var_of(l)] == 0) {
      prev = l;
      continue;
    }
    out.push_back(l);
    prev = l;
  }
  if (out.empty()) {
    ok_ = false;
    return false;
  }
  if (out.size() == 1) {
    enqueue(out[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  const CRef cr = alloc_clause(out, false, 0);
  clauses_.push_back(cr);
  attach(cr);
  return true;
}

CdclSolver::CRef CdclSolver::alloc_clause(std::span<const std::uint32_t> lits, bool is_learnt,
                                          std::uint32_t lbd_value) {
  const auto cr = static_cast<CRef>(arena_.size());
  arena_.push_back(static_cast<std::uint32_t>(lits.size()));
  arena_.push_back((is_learnt ? 1U : 0U) | (lbd_value << 2));
  arena_.push_back(0);
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  set_cact(cr, 0.0F);
  return cr;
}

void CdclSolver::attach(CRef c) {
  std::uint32_t* lits = clits(c);
  watches_[lits[0]].push_back({c, lits[1]});
  watches_[lits[1]].push_back({c, lits[0]});
}

void CdclSolver::enqueue(std::uint32_t lit, CRef reason) {
  const std::uint32_t v = var_of(lit);
  assigns_[v] = static_cast<std::uint8_t>((lit & 1U) ^ 1U);
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(lit);
}

CdclSolver::CRef CdclSolver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    const std::uint32_t p = trail_[qhead_++];
    const std::uint32_t false_lit = neg(p);
    std::vector<Watcher>& ws = watches_[false_lit];
    std::size_t i = 0;
    std::size_t j = 0;
    const std::size_t n = ws.size();
    while (i < n) {
      const Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      const CRef c = w.cref;
      std::uint32_t* lits = clits(c);
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      ++i;
      const std::uint32_t first = lits[0];
      const Watcher nw{c, first};
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = nw;
        continue;
      }
      const std::uint32_t size = csize(c);
      bool moved = false;
      for (std::uint32_t k = 2; k < size; ++k) {
        if (value(lits[k]) != 0) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1]].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = nw;
      if (value(first) == 0) {
        conflict = c;
        qhead_ = trail_.size();
        while (i < n) ws[j++] = ws[i++];
      } else {
        enqueue(first, c);
      }
    }
    ws.resize(j);
    if (conflict != kNoReason) break;
  }
  return conflict;
}

std::uint32_t CdclSolver::compute_lbd(std::span<const std::uint32_t> lits) {
  ++lbd_counter_;
  // Levels never exceed the variable count.
  if (lbd_stamp_.size() < static_cast<std::size_t>(num_vars_) + 1) {
    lbd_stamp_.resize(static_cast<std::size_t>(num_vars_) + 1, 0);
  }
  std::uint32_t count = 0;
  for (std::uint32_t l : lits) {
    const auto lv = static_cast<std::size_t>(level_[var_of(l)]);
    if (lbd_stamp_[lv] != lbd_counter_) {
      lbd_stamp_[lv] = lbd_counter_;
      ++count;
    }
  }
  return count;
}

void CdclSolver::analyze(CRef conflict, std::vector<std::uint32_t>& out_learnt, int& out_level) {
  int path_count = 0;
  std::uint32_t p = 0xffffffffU;
  out_learnt.clear();
  out_learnt.push_back(0);
  std::size_t index = trail_.size();
  CRef confl = conflict;

  do {
    if (learnt(confl)) bump_clause(confl);
    std::uint32_t* lits = clits(confl);
    const std::uint32_t size = csize(confl);
    for (std::uint32_t k = (p == 0xffffffffU) ? 0 : 1; k < size; ++k) {
      const std::uint32_t q = lits[k];
      const std::uint32_t v = var_of(q);
      if (seen_[v] == 0 && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level()) {
          ++path_count;
        } else {
          out_learnt.push_back(q);
        }
      }
    }
    while (seen_[var_of(trail_[--index])] == 0) {
    }
    p = trail_[index];
    confl = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path_count;
  } while (path_count > 0);
  out_learnt[0] = neg(p);

  analyze_toclear_.assign(out_learnt.begin(), out_learnt.end());
  std::uint32_t abstract_levels = 0;
  for (std::size_t k = 1; k < out_learnt.size(); ++k) abstract_levels |= abstract_level(var_of(out_learnt[k]));
  std::size_t keep = 1;
  for (std::size_t k = 1; k < out_learnt.size(); ++k) {
    const std::uint32_t v = var_of(out_learnt[k]);
    if (reason_[v] == kNoReason || !lit_redundant(out_learnt[k], abstract_levels)) {
      out_learnt[keep++] = out_learnt[k];
    }
  }
  out_learnt.resize(keep);

  out_level = 0;
  if (out_learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < out_learnt.size(); ++k) {
      if (level_[var_of(out_learnt[k])] > level_[var_of(out_learnt[max_i])]) max_i = k;
    }
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_level = level_[var_of(out_learnt[1])];
  }
  for (std::uint32_t l : analyze_toclear_) seen_[var_of(l)] = 0;
}

bool CdclSolver::lit_redundant(std::uint32_t lit, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(lit);
  const std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    const std::uint32_t q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const CRef c = reason_[var_of(q)];
    std::uint32_t* lits = clits(c);
    const std::uint32_t size = csize(c);
    for (std::uint32_t k = 1; k < size; ++k) {
      const std::uint32_t p = lits[k];
      const std::uint32_t v = var_of(p);
      if (seen_[v] != 0 || level_[v] == 0) continue;
      if (reason_[v] != kNoReason && (abstract_level(v) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(p);
        analyze_toclear_.push_back(p);
      } else {
        for (std::size_t j = top; j < analyze_toclear_.size(); ++j) seen_[var_of(analyze_toclear_[j])] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void CdclSolver::backtrack(int level) {
  if (decision_level() <= level) return;
  const std::size_t lim = trail_lim_[static_cast<std::size_t>(level)];
  for (std::size_t k = trail_.size(); k-- > lim;) {
    const std::uint32_t v = var_of(trail_[k]);
    assigns_[v] = 2;
    reason_[v] = kNoReason;
    polarity_[v] = static_cast<std::uint8_t>(trail_[k] & 1U);
    if (!heap_contains(v)) heap_insert(v);
  }
  trail_.resize(lim);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = lim;
}

std::uint32_t CdclSolver::pick_branch() {
  while (!heap_.empty()) {
    const std::uint32_t v = heap_pop();
    if (assigns_[v] == 2) return 2 * v + polarity_[v];
  }
  return 0xffffffffU;
}

void CdclSolver::bump_var(std::uint32_t var) {
  activity_[var] += var_inc_;
  if (activity_[var] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(var)) heap_up(static_cast<std::size_t>(heap_index_[var]));
}

void CdclSolver::bump_clause(CRef c) {
  const float a = cact(c) + static_cast<float>(clause_inc_);
  set_cact(c, a);
  if (a > 1e20F) {
    for (CRef l : learnts_) set_cact(l, cact(l) * 1e-20F);
    clause_inc_ *= 1e-20;
  }
}

void CdclSolver::reduce_db() {
  std::vector<CRef> sorted;
  sorted.reserve(learnts_.size());
  for (CRef c : learnts_) sorted.push_back(c);
  std::sort(sorted.begin(), sorted.end(), [this](CRef a, CRef b) {
    if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
    return cact(a) < cact(b);
  });
  const std::size_t limit = sorted.size() / 2;
  std::size_t removed = 0;
  for (CRef c : sorted) {
    if (removed >= limit) break;
    if (lbd(c) <= 2) continue;
    const std::uint32_t first = clits(c)[0];
    const bool locked = reason_[var_of(first)] == c && value(first) == 1;
    if (locked) continue;
    cflags(c) |= 2U;
    wasted_ += csize(c) + 3;
    ++removed;
  }
  learnts_.erase(std::remove_if(learnts_.begin(), learnts_.end(), [this](CRef c) { return deleted(c); }),
                 learnts_.end());
  for (auto& ws : watches_) {
    ws.erase(std::remove_if(ws.begin(), ws.end(), [this](const Watcher& w) { return deleted(w.cref); }),
             ws.end());
  }
  if (wasted_ * 2 > arena_.size()) collect_garbage();
}

void CdclSolver::collect_garbage() {
  std::vector<std::uint32_t> fresh;
  fresh.reserve(arena_.size() - wasted_);
  auto move = [&](CRef c) {
    const auto nc = static_cast<CRef>(fresh.size());
    const std::uint32_t total = csize(c) + 3;
    fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + total);
    arena_[c + 2] = nc;  // forwarding pointer
    return nc;
  };
  for (CRef& c : clauses_) c = move(c);
  for (CRef& c : learnts_) c = move(c);
  for (std::uint32_t lit : trail_) {
    const std::uint32_t v = var_of(lit);
    if (reason_[v] != kNoReason) reason_[v] = arena_[reason_[v] + 2];
  }
  arena_.swap(fresh);
  wasted_ = 0;
  for (auto& ws : watches_) ws.clear();
  for (CRef c : clauses_) attach(c);
  for (CRef c : learnts_) attach(c);
}

void CdclSolver::heap_insert(std::uint32_t var) {
  heap_index_[var] = static_cast<int>(heap_.size());
  heap_.push_back(var);
  heap_up(heap_.size() - 1);
}

void CdclSolver::heap_up(std::size_t pos) {
  const std::uint32_t v = heap_[pos];
  while (pos > 0) {
    const std::size_t parent = (pos - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[pos] = heap_[parent];
    heap_index_[heap_[pos]] = static_cast<int>(pos);
    pos = parent;
  }
  heap_[pos] = v;
  heap_index_[v] = static_cast<int>(pos);
}

void CdclSolver::heap_down(std::size_t pos) {
  const std::uint32_t v = heap_[pos];
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[pos] = heap_[child];
    heap_index_[heap_[pos]] = static_cast<int>(pos);
    pos = child;
  }
  heap_[pos] = v;
  heap_index_[v] = static_cast<int>(pos);
}

std::uint32_t CdclSolver::heap_pop() {
  const std::uint32_t top = heap_[0];
  heap_index_[top] = -1;
  const std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

CdclSolver::Result CdclSolver::solve(std::optional<std::chrono::steady_clock::time_point> deadline) {
  model_.clear();
  if (!ok_) return Result::Unsat;
  if (propagate() != kNoReason) {
    ok_ = false;
    return Result::Unsat;
  }

  std::vector<std::uint32_t> learnt_clause;
  std::uint64_t next_reduce = conflicts_ + 2000;
  std::uint64_t reductions = 0;
  int restarts = 0;
  auto out_of_time = [&] { return deadline && std::chrono::steady_clock::now() > *deadline; };

  for (;;) {
    const auto budget = static_cast<std::uint64_t>(luby(2.0, restarts++) * 100.0);
    std::uint64_t local_conflicts = 0;
    for (;;) {
      const CRef confl = propagate();
      if (confl != kNoReason) {
        ++conflicts_;
        ++local_conflicts;
        if (decision_level() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        int back_level = 0;
        analyze(confl, learnt_clause, back_level);
        backtrack(back_level);
        if (learnt_clause.size() == 1) {
          enqueue(learnt_clause[0], kNoReason);
        } else {
          const CRef cr = alloc_clause(learnt_clause, true, compute_lbd(learnt_clause));
          learnts_.push_back(cr);
          attach(cr);
          bump_clause(cr);
          enqueue(learnt_clause[0], cr);
        }
        var_inc_ /= kVarDecay;
        clause_inc_ /= kClauseDecay;
        if ((conflicts_ & 255U) == 0 && out_of_time()) {
          backtrack(0);
          return Result::Unknown;
        }
        continue;
      }
      if (local_conflicts >= budget) {
        backtrack(0);
        break;
      }
      if (conflicts_ >= next_reduce) {
        ++reductions;
        next_reduce = conflicts_ + 2000 + 300 * reductions;
        reduce_db();
      }
      const std::uint32_t next = pick_branch();
      if (next == 0xffffffffU) {
        model_.assign(static_cast<std::size_t>(num_vars_) + 1, false);
        for (int v = 0; v < num_vars_; ++v) model_[static_cast<std::size_t>(v) + 1] = assigns_[static_cast<std::size_t>(v)] == 1;
        backtrack(0);
        return Result::Sat;
      }
      ++decisions_;
      if ((decisions_ & 4095U) == 0 && out_of_time()) {
        backtrack(0);
        return Result::Unknown;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }
}

}  // namespace reactsyn
