#include "reactsyn/cnf.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "reactsyn/error.hpp"

namespace reactsyn {

unsigned bits_for(std::uint64_t max_value) {
  unsigned width = 1;
  while (width < 64 && (max_value >> width) != 0) ++width;
  return width;
}

Lit ConstraintSystem::new_var() { return ++num_vars_; }

Lit ConstraintSystem::true_lit() {
  if (true_lit_ == 0) {
    true_lit_ = new_var();
    add_clause({true_lit_});
  }
  return true_lit_;
}

Lit ConstraintSystem::new_named(const std::string& name) {
  return alloc_bitvec(name, 1)[0];
}

BitVec ConstraintSystem::alloc_bitvec(const std::string& name, unsigned width) {
  if (width == 0) throw Error("bit vector '" + name + "' must have width >= 1");
  if (registry_.count(name) != 0) throw Error("duplicate variable name '" + name + "'");
  BitVec bv = fresh_bitvec(width);
  registry_.emplace(name, bv);
  return bv;
}

BitVec ConstraintSystem::fresh_bitvec(unsigned width) {
  BitVec bv;
  bv.bits.reserve(width);
  for (unsigned i = 0; i < width; ++i) bv.bits.push_back(new_var());
  return bv;
}

void ConstraintSystem::add_clause(std::span<const Lit> lits) {
  for (Lit l : lits) {
    if (l == 0 || (l < 0 ? -l : l) > num_vars_) throw Error("literal out of range in clause");
  }
  clauses_.insert(clauses_.end(), lits.begin(), lits.end());
  clauses_.push_back(0);
  ++num_clauses_;
}

void ConstraintSystem::add_guarded(std::span<const Lit> guard, std::initializer_list<Lit> rest) {
  scratch_.clear();
  for (Lit g : guard) scratch_.push_back(-g);
  scratch_.insert(scratch_.end(), rest.begin(), rest.end());
  add_clause(scratch_);
}

void ConstraintSystem::assert_compare(const BitVec& lhs, const BitVec& rhs, CompareOp op,
                                      std::span<const Lit> guard) {
  if (lhs.width() != rhs.width()) throw Error("assert_compare: width mismatch");
  const std::size_t w = lhs.width();
  if (w == 0) throw Error("assert_compare: empty bit vectors");

  if (op == CompareOp::Equal) {
    for (std::size_t j = 0; j < w; ++j) {
      if (lhs[j] == rhs[j]) continue;
      add_guarded(guard, {lhs[j], -rhs[j]});
      add_guarded(guard, {-lhs[j], rhs[j]});
    }
    return;
  }

  // Ripple compare from the most significant bit. The premise at bit j is
  // either the guard (top bit) or an auxiliary "prefix still undecided" var.
  const bool strict = op == CompareOp::Greater;
  std::vector<Lit> premise(guard.begin(), guard.end());
  for (std::size_t jj = w; jj-- > 0;) {
    const Lit a = lhs[jj];
    const Lit b = rhs[jj];
    add_guarded(premise, {a, -b});
    if (jj == 0) {
      if (strict) {
        add_guarded(premise, {a});
        add_guarded(premise, {-b});
      }
      break;
    }
    const Lit next = new_var();
    add_guarded(premise, {a, next});
    add_guarded(premise, {-b, next});
    premise.assign(1, next);
  }
}

void ConstraintSystem::assert_leq_const(const BitVec& bv, std::uint64_t bound,
                                        std::span<const Lit> guard) {
  const std::size_t w = bv.width();
  if (w >= 64 || bound >= (std::uint64_t{1} << w) - 1) return;
  std::vector<Lit> clause;
  for (std::size_t j = 0; j < w; ++j) {
    if ((bound >> j) & 1U) continue;
    clause.clear();
    for (Lit g : guard) clause.push_back(-g);
    clause.push_back(-bv[j]);
    for (std::size_t k = j + 1; k < w; ++k) {
      if ((bound >> k) & 1U) clause.push_back(-bv[k]);
    }
    add_clause(clause);
  }
}

void ConstraintSystem::assert_equals_const(const BitVec& bv, std::uint64_t value,
                                           std::span<const Lit> guard) {
  for (std::size_t j = 0; j < bv.width(); ++j) {
    const bool bit = (value >> j) & 1U;
    add_guarded(guard, {bit ? bv[j] : -bv[j]});
  }
}

void ConstraintSystem::assert_below(const BitVec& bv, std::uint64_t count) {
  if (count == 0) throw Error("assert_below: empty range");
  assert_leq_const(bv, count - 1);
}

Lit ConstraintSystem::equals_const_lit(const BitVec& bv, std::uint64_t value) {
  std::vector<Lit> lits;
  lits.reserve(bv.width());
  for (std::size_t j = 0; j < bv.width(); ++j) {
    lits.push_back(((value >> j) & 1U) ? bv[j] : -bv[j]);
  }
  return and_lit(lits);
}

Lit ConstraintSystem::and_lit(std::span<const Lit> lits) {
  if (lits.size() == 1) return lits[0];
  const Lit out = new_var();
  std::vector<Lit> big;
  big.reserve(lits.size() + 1);
  for (Lit l : lits) {
    add_clause({-out, l});
    big.push_back(-l);
  }
  big.push_back(out);
  add_clause(big);
  return out;
}

Lit ConstraintSystem::or_lit(std::span<const Lit> lits) {
  if (lits.empty()) return -true_lit();
  if (lits.size() == 1) return lits[0];
  const Lit out = new_var();
  std::vector<Lit> big;
  big.reserve(lits.size() + 1);
  for (Lit l : lits) {
    add_clause({out, -l});
    big.push_back(l);
  }
  big.push_back(-out);
  add_clause(big);
  return out;
}

void ConstraintSystem::at_most_one(std::span<const Lit> lits) {
  if (lits.size() <= 6) {
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i + 1; j < lits.size(); ++j) add_clause({-lits[i], -lits[j]});
    return;
  }
  at_most_k(lits, 1);
}

void ConstraintSystem::exactly_one(std::span<const Lit> lits) {
  add_clause(lits);
  at_most_one(lits);
}

void ConstraintSystem::at_most_k(std::span<const Lit> lits, unsigned k) {
  const std::size_t n = lits.size();
  if (n <= k) return;
  if (k == 0) {
    for (Lit l : lits) add_clause({-l});
    return;
  }
  // Sinz sequential counter: s[i][j] <=> at least j+1 of lits[0..i] are true.
  std::vector<std::vector<Lit>> s(n - 1, std::vector<Lit>(k));
  for (auto& row : s)
    for (auto& v : row) v = new_var();
  add_clause({-lits[0], s[0][0]});
  for (unsigned j = 1; j < k; ++j) add_clause({-s[0][j]});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    add_clause({-lits[i], s[i][0]});
    add_clause({-s[i - 1][0], s[i][0]});
    for (unsigned j = 1; j < k; ++j) {
      add_clause({-lits[i], -s[i - 1][j - 1], s[i][j]});
      add_clause({-s[i - 1][j], s[i][j]});
    }
    add_clause({-lits[i], -s[i - 1][k - 1]});
  }
  add_clause({-lits[n - 1], -s[n - 2][k - 1]});
}

std::vector<std::vector<Lit>> ConstraintSystem::clause_list() const {
  std::vector<std::vector<Lit>> out;
  out.reserve(num_clauses_);
  std::vector<Lit> current;
  for (Lit l : clauses_) {
    if (l == 0) {
      out.push_back(current);
      current.clear();
    } else {
      current.push_back(l);
    }
  }
  return out;
}

const BitVec& ConstraintSystem::lookup(const std::string& name) const {
  auto it = registry_.find(name);
  if (it == registry_.end()) throw Error("unknown variable name '" + name + "'");
  return it->second;
}

void ConstraintSystem::write_dimacs(std::ostream& out) const {
  out << "p cnf " << num_vars_ << ' ' << num_clauses_ << '\n';
  std::string line;
  for (Lit l : clauses_) {
    line += std::to_string(l);
    if (l == 0) {
      line += '\n';
      out << line;
      line.clear();
    } else {
      line += ' ';
    }
  }
}

void ConstraintSystem::write_name_map(std::ostream& out) const {
  for (const auto& [name, bv] : registry_) {
    if (bv.width() == 1) {
      out << bv[0] << ' ' << name << '\n';
      continue;
    }
    for (std::size_t j = 0; j < bv.width(); ++j) out << bv[j] << ' ' << name << '[' << j << "]\n";
  }
}

DimacsProblem parse_dimacs(std::istream& in) {
  DimacsProblem problem;
  bool header = false;
  std::size_t declared_clauses = 0;
  std::vector<Lit> current;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    const char c = line[start];
    if (c == 'c') continue;
    if (c == '%') break;
    std::istringstream ls(line);
    if (c == 'p') {
      std::string p, fmt;
      long long vars = -1, clauses = -1;
      ls >> p >> fmt >> vars >> clauses;
      if (fmt != "cnf" || vars < 0 || clauses < 0) throw ParseError("malformed DIMACS header", line_no, 1);
      problem.num_vars = static_cast<int>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      header = true;
      continue;
    }
    if (!header) throw ParseError("clause before DIMACS header", line_no, 1);
    long long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        problem.clauses.push_back(current);
        current.clear();
        continue;
      }
      if (std::llabs(lit) > problem.num_vars) throw ParseError("literal exceeds declared variables", line_no, 1);
      current.push_back(static_cast<Lit>(lit));
    }
    if (!ls.eof()) throw ParseError("non-numeric token in clause", line_no, 1);
  }
  if (!header) throw ParseError("missing DIMACS header", line_no, 1);
  if (!current.empty()) problem.clauses.push_back(current);
  if (problem.clauses.size() != declared_clauses) {
    throw ParseError("clause count does not match header", line_no, 1);
  }
  return problem;
}

std::uint64_t Model::value(const BitVec& bv) const {
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < bv.width(); ++j) {
    if (value(bv[j])) v |= std::uint64_t{1} << j;
  }
  return v;
}

}  // namespace reactsyn
