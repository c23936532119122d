#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace reactsyn {

/// DIMACS-style literal: +v or -v for variable v >= 1.
using Lit = int;

/// Bit-blasted unsigned integer, least significant bit first.
struct BitVec {
  std::vector<Lit> bits;

  std::size_t width() const { return bits.size(); }
  Lit operator[](std::size_t i) const { return bits[i]; }
};

enum class CompareOp { Greater, GreaterEqual, Equal };

/// Number of bits needed to represent every value in [0, max_value].
unsigned bits_for(std::uint64_t max_value);

/// CNF under construction. Clauses are stored flat, zero-terminated.
class ConstraintSystem {
 public:
  Lit new_var();
  Lit true_lit();

  /// Fresh boolean registered under `name`. Throws on duplicate names.
  Lit new_named(const std::string& name);
  /// Fresh contiguous bit vector registered under `name`.
  BitVec alloc_bitvec(const std::string& name, unsigned width);
  /// Fresh bit vector without a registry entry.
  BitVec fresh_bitvec(unsigned width);

  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }
  /// Adds (not g1 or ... or not gk or rest...).
  void add_guarded(std::span<const Lit> guard, std::initializer_list<Lit> rest);

  /// Under the conjunction of `guard`, enforce `lhs op rhs` (unsigned).
  void assert_compare(const BitVec& lhs, const BitVec& rhs, CompareOp op,
                      std::span<const Lit> guard = {});
  void assert_leq_const(const BitVec& bv, std::uint64_t bound, std::span<const Lit> guard = {});
  void assert_equals_const(const BitVec& bv, std::uint64_t value, std::span<const Lit> guard = {});
  /// Restricts `bv` to values < `count` (no-op when count covers every code).
  void assert_below(const BitVec& bv, std::uint64_t count);

  /// Literal equivalent to (bv == value).
  Lit equals_const_lit(const BitVec& bv, std::uint64_t value);
  /// Literal equivalent to the conjunction of `lits`.
  Lit and_lit(std::span<const Lit> lits);
  /// Literal equivalent to the disjunction of `lits`.
  Lit or_lit(std::span<const Lit> lits);

  void at_most_one(std::span<const Lit> lits);
  void exactly_one(std::span<const Lit> lits);
  /// Sequential-counter encoding of sum(lits) <= k.
  void at_most_k(std::span<const Lit> lits, unsigned k);

  int num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return num_clauses_; }
  const std::vector<Lit>& flat_clauses() const { return clauses_; }
  std::vector<std::vector<Lit>> clause_list() const;

  const std::map<std::string, BitVec>& registry() const { return registry_; }
  const BitVec& lookup(const std::string& name) const;

  void write_dimacs(std::ostream& out) const;
  /// One line per registered variable: "<index> <name>[<bit>]".
  void write_name_map(std::ostream& out) const;

 private:
  int num_vars_ = 0;
  std::size_t num_clauses_ = 0;
  Lit true_lit_ = 0;
  std::vector<Lit> clauses_;
  std::vector<Lit> scratch_;
  std::map<std::string, BitVec> registry_;
};

/// Parsed DIMACS problem.
struct DimacsProblem {
  int num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
};

DimacsProblem parse_dimacs(std::istream& in);

/// Total assignment, indexed by variable (index 0 unused).
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<bool> values) : values_(std::move(values)) {}

  bool value(Lit lit) const {
    const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
    const bool v = var < values_.size() && values_[var];
    return lit < 0 ? !v : v;
  }
  std::uint64_t value(const BitVec& bv) const;
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<bool> values_;
};

}  // namespace reactsyn
