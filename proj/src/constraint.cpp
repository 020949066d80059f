#include "ccx/constraint.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccx {

Bound Bound::from_beta(const Term& beta) {
  if (!beta.ground()) throw std::invalid_argument("bound term must be ground");
  return Bound{beta, beta.size()};
}

Bound Bound::of_size(std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("bound limit must be positive");
  return Bound{std::nullopt, limit};
}

// --------------------------------------------------------------- Constraint

Constraint::Constraint(std::vector<Term> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end(), TermLess{});
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

void Constraint::add(const Term& atom) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom, TermLess{});
  if (it == atoms_.end() || !(*it == atom)) atoms_.insert(it, atom);
}

Constraint Constraint::conjoin(const Constraint& other) const {
  std::vector<Term> all;
  all.reserve(atoms_.size() + other.atoms_.size());
  std::merge(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(),
             std::back_inserter(all), TermLess{});
  all.erase(std::unique(all.begin(), all.end()), all.end());
  Constraint out;
  out.atoms_ = std::move(all);
  return out;
}

Constraint Constraint::apply(const Substitution& s) const {
  return Constraint(ccx::apply(s, atoms_));
}

VarSet Constraint::vars() const { return ccx::vars(atoms_); }

// ---------------------------------------------------------------------- lic

namespace {
void push_occurrences(const Term& t, std::vector<VarId>& out) {
  if (t.ground()) return;
  if (t.is_var()) {
    out.push_back(t.var());
    return;
  }
  for (const auto& a : t.args()) push_occurrences(a, out);
}

/// Occurrence count per variable, sorted by variable.
std::vector<std::pair<VarId, std::int64_t>> occurrence_profile(const Term& t) {
  std::vector<VarId> occ;
  push_occurrences(t, occ);
  std::sort(occ.begin(), occ.end());
  std::vector<std::pair<VarId, std::int64_t>> out;
  for (VarId v : occ) {
    if (!out.empty() && out.back().first == v)
      ++out.back().second;
    else
      out.emplace_back(v, 1);
  }
  return out;
}
}  // namespace

bool LinearConstraint::satisfiable() const {
  std::int64_t lhs = 0;
  for (const auto& [v, c] : coeffs) lhs += c;
  return lhs <= rhs;
}

LinearConstraint lic(const Term& atom, const Bound& bound) {
  LinearConstraint out;
  out.coeffs = occurrence_profile(atom);
  std::int64_t occurrences = 0;
  for (const auto& [v, c] : out.coeffs) occurrences += c;
  out.rhs = static_cast<std::int64_t>(bound.limit) -
            (static_cast<std::int64_t>(atom.size()) - occurrences);
  return out;
}

bool satisfiable(const Constraint& c, const Bound& bound) {
  // With every variable of size 1 an atom's size is its plain symbol count.
  for (const auto& a : c.atoms())
    if (a.size() > bound.limit) return false;
  return true;
}

// ---------------------------------------------------------------- implies

namespace {

/// Maximizes sum(obj_i * v_i) over integer points v_i >= 1 of
/// { rows_j : sum(a_ji * v_i) <= b_j }, stopping as soon as the objective
/// exceeds `threshold`. Variables are box-bounded by the rows.
class BoundedMaximizer {
 public:
  BoundedMaximizer(std::vector<std::int64_t> objective,
                   std::vector<std::vector<std::int64_t>> rows,
                   std::vector<std::int64_t> rhs, std::int64_t threshold)
      : obj_(std::move(objective)), rows_(std::move(rows)), rhs_(std::move(rhs)),
        threshold_(threshold) {}

  /// True when some feasible point has objective > threshold.
  bool exceeds() {
    const std::size_t n = obj_.size();
    slack_.resize(rows_.size());
    for (std::size_t j = 0; j < rows_.size(); ++j) {
      std::int64_t lhs = 0;
      for (std::size_t i = 0; i < n; ++i) lhs += rows_[j][i];
      slack_[j] = rhs_[j] - lhs;
      if (slack_[j] < 0) return false;  // infeasible: implication holds vacuously
    }
    upper_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t ub = -1;
      for (std::size_t j = 0; j < rows_.size(); ++j) {
        if (rows_[j][i] == 0) continue;
        std::int64_t cap = 1 + slack_[j] / rows_[j][i];
        ub = ub < 0 ? cap : std::min(ub, cap);
      }
      if (ub < 0) return obj_[i] > 0;  // unbounded direction
      upper_[i] = ub;
    }
    std::int64_t base = 0;
    for (std::size_t i = 0; i < n; ++i) base += obj_[i];
    return search(0, base);
  }

 private:
  bool search(std::size_t i, std::int64_t current) {
    if (current > threshold_) return true;
    if (i == obj_.size()) return false;
    // Optimistic completion: every remaining variable at its box bound.
    std::int64_t optimistic = current;
    for (std::size_t k = i; k < obj_.size(); ++k) optimistic += obj_[k] * (upper_[k] - 1);
    if (optimistic <= threshold_) return false;
    // Largest feasible increment of v_i given current slack.
    std::int64_t max_inc = upper_[i] - 1;
    for (std::size_t j = 0; j < rows_.size(); ++j)
      if (rows_[j][i] > 0) max_inc = std::min(max_inc, slack_[j] / rows_[j][i]);
    for (std::int64_t inc = max_inc; inc >= 0; --inc) {
      for (std::size_t j = 0; j < rows_.size(); ++j) slack_[j] -= rows_[j][i] * inc;
      bool hit = search(i + 1, current + obj_[i] * inc);
      for (std::size_t j = 0; j < rows_.size(); ++j) slack_[j] += rows_[j][i] * inc;
      if (hit) return true;
    }
    return false;
  }

  std::vector<std::int64_t> obj_;
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::int64_t> rhs_;
  std::int64_t threshold_;
  std::vector<std::int64_t> slack_, upper_;
};

}  // namespace

ImplicationChecker::ImplicationChecker(const Constraint& lhs, const Bound& bound)
    : bound_(bound), vacuous_(!satisfiable(lhs, bound)), atoms_(lhs.atoms().begin(), lhs.atoms().end()) {}

void ImplicationChecker::prepare() const {
  if (prepared_) return;
  prepared_ = true;
  std::vector<VarId> vs;
  for (const auto& a : atoms_) {
    if (a.ground()) continue;
    premises_.push_back(lic(a, bound_));
    for (const auto& [v, c] : premises_.back().coeffs) vs.push_back(v);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  premise_vars_ = std::move(vs);
}

bool ImplicationChecker::implies(const Constraint& rhs) const {
  if (vacuous_) return true;
  for (const auto& atom : rhs.atoms())
    if (!implies_atom(atom)) return false;
  return true;
}

bool ImplicationChecker::implies_atom(const Term& atom) const {
  if (vacuous_) return true;
  if (atom.ground()) return bound_.admits(atom);
  if (std::binary_search(atoms_.begin(), atoms_.end(), atom, TermLess{})) return true;
  prepare();
  LinearConstraint goal = lic(atom, bound_);
  // Goal variables the premises do not mention take their smallest size.
  std::vector<VarId> gvars;
  std::vector<std::int64_t> objective;
  std::int64_t threshold = goal.rhs;
  for (const auto& [v, c] : goal.coeffs) {
    if (varset::contains(premise_vars_, v)) {
      gvars.push_back(v);
      objective.push_back(c);
    } else {
      threshold -= c;
    }
  }
  if (gvars.empty()) return threshold >= 0;

  // A single premise with coefficients at least the goal's on every goal
  // variable settles it: the surplus is smallest with all variables at 1.
  for (const auto& p : premises_) {
    std::int64_t surplus = 0;
    std::size_t k = 0, covered = 0;
    for (const auto& [v, c] : p.coeffs) {
      while (k < gvars.size() && gvars[k] < v) ++k;
      std::int64_t cg = 0;
      if (k < gvars.size() && gvars[k] == v) {
        cg = objective[k];
        ++covered;
      }
      if (cg > c) {
        covered = 0;
        break;
      }
      surplus += c - cg;
    }
    if (covered == gvars.size() && p.rhs - surplus <= threshold) return true;
  }

  // Premise variables outside the goal are fixed to 1: it only loosens the
  // premises, and they do not influence the objective.
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::int64_t> rows_rhs;
  for (const auto& p : premises_) {
    std::vector<std::int64_t> row(gvars.size(), 0);
    std::int64_t b = p.rhs;
    bool touches = false;
    for (const auto& [v, c] : p.coeffs) {
      auto it = std::lower_bound(gvars.begin(), gvars.end(), v);
      if (it != gvars.end() && *it == v) {
        row[static_cast<std::size_t>(it - gvars.begin())] = c;
        touches = true;
      } else {
        b -= c;
      }
    }
    if (touches) {
      rows.push_back(std::move(row));
      rows_rhs.push_back(b);
    }
  }
  BoundedMaximizer bm(std::move(objective), std::move(rows), std::move(rows_rhs), threshold);
  return !bm.exceeds();
}

bool implies(const Constraint& lhs, const Constraint& rhs, const Bound& bound) {
  if (rhs.empty()) return true;
  return ImplicationChecker(lhs, bound).implies(rhs);
}

// ----------------------------------------------------------- reduce_atoms

Constraint reduce_atoms(const Constraint& c) {
  const auto atoms = c.atoms();
  std::vector<std::vector<std::pair<VarId, std::int64_t>>> profiles;
  profiles.reserve(atoms.size());
  for (const auto& a : atoms) profiles.push_back(occurrence_profile(a));
  // Per profile the largest atom survives; among equal sizes the first.
  std::vector<std::size_t> order(atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (profiles[i] != profiles[j]) return profiles[i] < profiles[j];
    if (atoms[i].size() != atoms[j].size()) return atoms[i].size() > atoms[j].size();
    return i < j;
  });
  std::vector<Term> kept;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (k == 0 || profiles[order[k]] != profiles[order[k - 1]]) kept.push_back(atoms[order[k]]);
  return Constraint(std::move(kept));
}

// ---------------------------------------------------------- enumeration

std::vector<std::vector<Term>> ground_terms_by_size(const Signature& sig, std::size_t limit) {
  std::vector<std::vector<Term>> by_size(limit + 1);
  for (std::size_t k = 1; k <= limit; ++k) {
    for (SymbolId f = 0; f < sig.size(); ++f) {
      const unsigned n = sig[f].arity;
      if (n == 0) {
        if (k == 1) by_size[1].push_back(Term::apply(f));
        continue;
      }
      if (k < n + 1) continue;
      // Distribute k-1 symbols over n argument positions, each at least 1.
      std::vector<std::size_t> parts(n, 1);
      std::vector<Term> args(n);
      auto fill = [&](auto&& self, unsigned pos, std::size_t remaining) -> void {
        if (pos + 1 == n) {
          if (remaining == 0 || remaining >= by_size.size()) return;
          for (const auto& t : by_size[remaining]) {
            args[pos] = t;
            by_size[k].push_back(Term::apply(f, args));
          }
          return;
        }
        for (std::size_t s = 1; s + (n - pos - 1) <= remaining; ++s) {
          for (const auto& t : by_size[s]) {
            args[pos] = t;
            self(self, pos + 1, remaining - s);
          }
        }
      };
      fill(fill, 0, k - 1);
    }
    std::sort(by_size[k].begin(), by_size[k].end(), TermLess{});
  }
  return by_size;
}

std::vector<Term> enumerate_ground_terms(const Signature& sig, const Bound& bound) {
  auto by_size = ground_terms_by_size(sig, bound.limit);
  std::vector<Term> out;
  for (auto& layer : by_size)
    for (auto& t : layer) out.push_back(std::move(t));
  return out;
}

std::string to_string(const Constraint& c, const Signature& sig,
                      const std::unordered_map<VarId, std::string>* var_names) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c.atoms()[i], sig, var_names);
  }
  return out;
}

}  // namespace ccx
