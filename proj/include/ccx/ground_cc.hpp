#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccx/classes.hpp"
#include "ccx/constraint.hpp"
#include "ccx/term.hpp"

namespace ccx {

using Equation = std::pair<Term, Term>;
using EquationSet = std::vector<Equation>;

/// Partition of ground terms into blocks; block labels are canonical (a
/// block is labelled by the position of its first member).
class GroundPartition {
 public:
  GroundPartition() = default;
  /// `labels[i]` is any block identifier for `universe[i]`.
  GroundPartition(std::vector<Term> universe, const std::vector<std::size_t>& labels);

  const std::vector<Term>& universe() const { return universe_; }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of(const Term& t) const;
  bool same(const Term& a, const Term& b) const;

  std::vector<std::vector<Term>> blocks() const;
  std::size_t blocks_total() const;
  std::size_t blocks_nonsingleton() const;

  friend bool operator==(const GroundPartition& a, const GroundPartition& b) {
    return a.universe_ == b.universe_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<Term> universe_;
  std::vector<std::size_t> labels_;
  std::unordered_map<Term, std::size_t, TermHash> position_;
};

/// Every ground instance (s = t)sigma with both sides in M. Throws
/// BudgetExceeded after `cap` instances have been examined.
EquationSet ground_equations(const EquationSet& eqs, const Signature& sig, const Bound& bound,
                             std::size_t cap = kDefaultGroundingCap);

/// Congruence closure of `eqs` over a subterm-closed universe, by union-find
/// with a signature table. Throws std::invalid_argument when an equation
/// side lies outside the universe.
GroundPartition cc_saturate(const std::vector<Term>& universe, const EquationSet& eqs);

/// Least relation over `universe` containing `eqs` and closed under
/// reflexivity, symmetry, transitivity and congruence, computed by naive
/// fixpoint iteration. Meant for small universes only; throws
/// BudgetExceeded above `max_universe` terms.
GroundPartition eq_closure(const std::vector<Term>& universe, const EquationSet& eqs,
                           std::size_t max_universe = 5000);

struct GroundCcOptions {
  std::optional<std::chrono::milliseconds> time_limit;
  std::size_t cap = 20'000'000;
};

struct GroundCcResult {
  GroundPartition partition;
  bool completed = false;
  double time_ms = 0;
};

/// The baseline run: enumerate T_{<=limit}, ground the equations and close.
/// A spent time budget or enumeration cap yields completed == false.
GroundCcResult run_ground_cc(const Signature& sig, const EquationSet& eqs, const Bound& bound,
                             const GroundCcOptions& options = {});

/// Statistics lines followed by one block per line.
std::string dump(const GroundPartition& p, const Signature& sig, double time_ms = 0);

}  // namespace ccx
