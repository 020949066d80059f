#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccx/term.hpp"

namespace ccx {

/// Upper bound of the ground term space M: every ground term whose symbol
/// count does not exceed `limit`.
struct Bound {
  std::optional<Term> beta;
  std::size_t limit = 1;

  /// Throws std::invalid_argument when `beta` is not ground.
  static Bound from_beta(const Term& beta);
  /// Bound given by its size alone (no witness term required).
  static Bound of_size(std::size_t limit);

  bool admits(const Term& ground_term) const { return ground_term.size() <= limit; }
};

/// Conjunction of atoms t, each read as "t is in M" (size(t sigma) <= limit).
/// Atoms are kept sorted and duplicate-free.
class Constraint {
 public:
  Constraint() = default;
  explicit Constraint(std::vector<Term> atoms);

  std::span<const Term> atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  void add(const Term& atom);
  Constraint conjoin(const Constraint& other) const;
  Constraint apply(const Substitution& s) const;
  VarSet vars() const;

  friend bool operator==(const Constraint&, const Constraint&) = default;

 private:
  std::vector<Term> atoms_;
};

/// Linear integer abstraction of one size atom:
///   x_i >= 1 for every variable, and sum(coeff_i * x_i) <= rhs.
struct LinearConstraint {
  std::vector<std::pair<VarId, std::int64_t>> coeffs;  // sorted by variable
  std::int64_t rhs = 0;

  /// Evaluates at an assignment given as a lookup function.
  template <class Value>
  bool holds(Value&& value_of) const {
    std::int64_t lhs = 0;
    for (const auto& [v, c] : coeffs) lhs += c * value_of(v);
    return lhs <= rhs;
  }
  /// True when every variable may take the value 1.
  bool satisfiable() const;
};

LinearConstraint lic(const Term& atom, const Bound& bound);

/// True iff assigning size 1 to every variable satisfies every atom.
bool satisfiable(const Constraint& c, const Bound& bound);

/// Decides whether every assignment (all variables >= 1) satisfying `lhs`
/// also satisfies `rhs`. Variables of `rhs` absent from `lhs` are
/// existentially quantified; since the abstraction is monotone they are
/// fixed to the smallest size 1.
bool implies(const Constraint& lhs, const Constraint& rhs, const Bound& bound);

/// `implies` with the premise side prepared once, for many goals.
class ImplicationChecker {
 public:
  ImplicationChecker(const Constraint& lhs, const Bound& bound);
  bool implies(const Constraint& rhs) const;
  /// One goal atom.
  bool implies_atom(const Term& atom) const;

 private:
  Bound bound_;
  bool vacuous_ = false;  // unsatisfiable premise
  std::vector<Term> atoms_;
  // Built on the first goal that is not settled syntactically.
  void prepare() const;
  mutable bool prepared_ = false;
  mutable std::vector<LinearConstraint> premises_;
  mutable VarSet premise_vars_;
};

/// Drops an atom whenever another atom with the same per-variable occurrence
/// counts is at least as large. The result is equivalent under lic.
Constraint reduce_atoms(const Constraint& c);

/// All ground terms of size <= bound.limit, ordered by `compare`.
std::vector<Term> enumerate_ground_terms(const Signature& sig, const Bound& bound);

/// Ground terms of each exact size 1..limit (index 0 unused).
std::vector<std::vector<Term>> ground_terms_by_size(const Signature& sig, std::size_t limit);

std::string to_string(const Constraint& c, const Signature& sig,
                      const std::unordered_map<VarId, std::string>* var_names = nullptr);

}  // namespace ccx
