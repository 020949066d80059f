#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ccx/constraint.hpp"
#include "ccx/term.hpp"

namespace ccx {

/// One bit per signature symbol: set when some class term has that symbol
/// on top. A separate flag records a bare variable term.
class SymbolBits {
 public:
  void set(SymbolId f);
  bool test(SymbolId f) const;
  bool has_variable_term() const { return variable_term_; }
  void set_variable_term() { variable_term_ = true; }
  /// NOT(this) AND other is empty, i.e. every symbol set in `other` is set here.
  bool covers(const SymbolBits& other) const;

  friend bool operator==(const SymbolBits&, const SymbolBits&) = default;

 private:
  std::vector<std::uint64_t> words_;
  bool variable_term_ = false;
};

/// A set of terms sharing one constraint {G || s1, ..., sn}. Terms are kept
/// in canonical order; the constraint always contains (a reduction of) the
/// membership atoms of the terms themselves.
class CongruenceClass {
 public:
  /// Throws std::invalid_argument when `terms` is empty.
  static CongruenceClass make(std::vector<Term> terms, const Constraint& extra = {});

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const Constraint& constraint() const { return constraint_; }

  /// Variables shared by every term.
  const VarSet& separating() const { return separating_; }
  /// Term variables that are not separating.
  const VarSet& free() const { return free_; }
  const VarSet& term_vars() const { return term_vars_; }
  /// Variables occurring only in constraint atoms.
  VarSet constraint_only_vars() const;
  /// Every variable of terms and constraint.
  VarSet vars() const;
  std::int64_t max_var() const;

  const SymbolBits& top_symbols() const { return bits_; }
  bool has_variable_term() const { return bits_.has_variable_term(); }

  /// Applies `s` to terms and constraint and rebuilds the caches.
  CongruenceClass apply(const Substitution& s) const;
  /// Variable-disjoint copy with every variable drawn from `fresh`.
  CongruenceClass renamed(FreshVars& fresh) const;

  friend bool operator==(const CongruenceClass& a, const CongruenceClass& b) {
    return a.terms_ == b.terms_ && a.constraint_ == b.constraint_;
  }

 private:
  CongruenceClass() = default;
  std::vector<Term> terms_;
  Constraint constraint_;
  VarSet separating_, free_, term_vars_;
  SymbolBits bits_;
};

inline CongruenceClass make_class(std::vector<Term> terms, const Constraint& extra = {}) {
  return CongruenceClass::make(std::move(terms), extra);
}

struct SeparatingFree {
  VarSet separating;
  VarSet free;
};
SeparatingFree separating_free_vars(const CongruenceClass& a);

/// True when every class term is covered by a membership atom.
bool is_m_constrained(const CongruenceClass& a);

/// Adds one renamed copy of every term containing free variables and
/// conjoins the renamed constraint.
CongruenceClass normalize(const CongruenceClass& a, FreshVars& fresh);

/// Maps every constraint-only variable to one shared fresh variable.
CongruenceClass collapse_constraint_vars(const CongruenceClass& a, FreshVars& fresh);

/// Removes a term s_j together with a matcher s_i*delta = s_j whenever the
/// resulting class still subsumes the original, until no step applies.
CongruenceClass condense(const CongruenceClass& a, const Bound& bound);

struct TermVectorLess {
  bool operator()(const std::vector<Term>& x, const std::vector<Term>& y) const {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), TermLess{});
  }
};

/// Family of ground classes, each sorted by `compare`.
using GroundClassFamily = std::set<std::vector<Term>, TermVectorLess>;

/// Raised when a grounding enumeration would exceed its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultGroundingCap = 1'000'000;

/// Ground semantics of a class over the ground terms of `bound`: split on
/// instantiations of the separating variables whose constraint is
/// satisfiable, then collect all admissible instances of every term.
/// Throws BudgetExceeded past `cap` grounding assignments.
GroundClassFamily gnd(const CongruenceClass& a, const Signature& sig, const Bound& bound,
                      std::size_t cap = kDefaultGroundingCap);

/// "{atoms || terms}" rendering; variables are renamed X1, X2, ... by first
/// appearance.
std::string to_string(const CongruenceClass& a, const Signature& sig);

}  // namespace ccx
