#include "ccx/classes.hpp"

#include <map>
#include <unordered_map>

#include "ccx/subsumption.hpp"

namespace ccx {

void SymbolBits::set(SymbolId f) {
  const std::size_t w = f / 64;
  if (words_.size() <= w) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t{1} << (f % 64);
}

bool SymbolBits::test(SymbolId f) const {
  const std::size_t w = f / 64;
  return w < words_.size() && (words_[w] >> (f % 64)) & 1U;
}

bool SymbolBits::covers(const SymbolBits& other) const {
  for (std::size_t w = 0; w < other.words_.size(); ++w) {
    const std::uint64_t mine = w < words_.size() ? words_[w] : 0;
    if (~mine & other.words_[w]) return false;
  }
  return true;
}

// ---------------------------------------------------------- CongruenceClass

CongruenceClass CongruenceClass::make(std::vector<Term> terms, const Constraint& extra) {
  if (terms.empty()) throw std::invalid_argument("congruence class needs at least one term");
  std::sort(terms.begin(), terms.end(), TermLess{});
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  CongruenceClass c;
  c.constraint_ = reduce_atoms(extra.conjoin(Constraint(terms)));
  c.separating_ = ccx::vars(terms.front());
  for (const auto& t : terms) {
    VarSet vt = ccx::vars(t);
    c.separating_ = varset::intersect(c.separating_, vt);
    c.term_vars_ = varset::unite(c.term_vars_, vt);
    if (t.is_var())
      c.bits_.set_variable_term();
    else
      c.bits_.set(t.symbol());
  }
  c.free_ = varset::subtract(c.term_vars_, c.separating_);
  c.terms_ = std::move(terms);
  return c;
}

VarSet CongruenceClass::constraint_only_vars() const {
  return varset::subtract(constraint_.vars(), term_vars_);
}

VarSet CongruenceClass::vars() const { return varset::unite(term_vars_, constraint_.vars()); }

std::int64_t CongruenceClass::max_var() const {
  const VarSet all = vars();
  return all.empty() ? -1 : static_cast<std::int64_t>(all.back());
}

CongruenceClass CongruenceClass::apply(const Substitution& s) const {
  return make(ccx::apply(s, terms_), constraint_.apply(s));
}

CongruenceClass CongruenceClass::renamed(FreshVars& fresh) const {
  // A variable bijection keeps every cache valid up to the renaming, so
  // nothing is recomputed.
  const Substitution sigma = fresh_renaming(vars(), fresh);
  auto rename = [&](const VarSet& vs) {
    VarSet out;
    out.reserve(vs.size());
    for (VarId v : vs) out.push_back(sigma.find(v)->var());
    std::sort(out.begin(), out.end());
    return out;
  };
  CongruenceClass c;
  c.terms_ = ccx::apply(sigma, terms_);
  std::sort(c.terms_.begin(), c.terms_.end(), TermLess{});
  c.constraint_ = constraint_.apply(sigma);
  c.separating_ = rename(separating_);
  c.free_ = rename(free_);
  c.term_vars_ = rename(term_vars_);
  c.bits_ = bits_;
  return c;
}

SeparatingFree separating_free_vars(const CongruenceClass& a) {
  return {a.separating(), a.free()};
}

bool is_m_constrained(const CongruenceClass& a) {
  // An atom covers t when it has the same occurrence profile and is at
  // least as large: its lic row then implies the row of t.
  auto profile = [](const Term& t) {
    std::map<VarId, std::size_t> p;
    for (VarId v : vars(t)) p[v] = occ_count(v, t);
    return p;
  };
  for (const auto& t : a.terms()) {
    const auto pt = profile(t);
    bool covered = std::any_of(a.constraint().atoms().begin(), a.constraint().atoms().end(),
                               [&](const Term& atom) {
                                 return atom.size() >= t.size() && profile(atom) == pt;
                               });
    if (!covered) return false;
  }
  return true;
}

CongruenceClass normalize(const CongruenceClass& a, FreshVars& fresh) {
  if (a.free().empty()) return a;
  fresh.reserve_above(static_cast<VarId>(a.max_var()));
  const Substitution sigma = fresh_renaming(a.free(), fresh);
  std::vector<Term> terms(a.terms().begin(), a.terms().end());
  for (const auto& t : a.terms())
    if (!varset::disjoint(vars(t), a.free())) terms.push_back(sigma.apply(t));
  return make_class(std::move(terms), a.constraint().conjoin(a.constraint().apply(sigma)));
}

CongruenceClass collapse_constraint_vars(const CongruenceClass& a, FreshVars& fresh) {
  const VarSet only = a.constraint_only_vars();
  if (only.empty()) return a;
  if (a.max_var() >= 0) fresh.reserve_above(static_cast<VarId>(a.max_var()));
  const Term shared = Term::variable(fresh.fresh());
  Substitution sigma;
  for (VarId v : only) sigma.bind(v, shared);
  return a.apply(sigma);
}

CongruenceClass condense(const CongruenceClass& a, const Bound& bound) {
  CongruenceClass current = a;
  bool progress = true;
  while (progress && current.size() > 1) {
    progress = false;
    const auto ts = current.terms();
    for (std::size_t i = 0; i < ts.size() && !progress; ++i) {
      for (std::size_t j = 0; j < ts.size() && !progress; ++j) {
        if (i == j) continue;
        auto delta = match(ts[i], ts[j]);
        if (!delta) continue;
        std::vector<Term> rest;
        for (std::size_t k = 0; k < ts.size(); ++k)
          if (k != j) rest.push_back(delta->apply(ts[k]));
        CongruenceClass reduced =
            make_class(std::move(rest), current.constraint().apply(*delta));
        if (subsumes_by_matching(reduced, current, bound)) {
          current = std::move(reduced);
          progress = true;
        }
      }
    }
  }
  return current;
}

// ---------------------------------------------------------------------- gnd

namespace {

class GroundingBudget {
 public:
  explicit GroundingBudget(std::size_t cap) : cap_(cap) {}
  void charge() {
    if (++used_ > cap_) throw BudgetExceeded("grounding enumeration exceeds its budget");
  }

 private:
  std::size_t cap_;
  std::size_t used_ = 0;
};

/// Calls `visit` with every ground substitution of `vs` into `universe`.
template <class Visit>
void for_each_grounding(const VarSet& vs, const std::vector<Term>& universe,
                        GroundingBudget& budget, Visit&& visit) {
  Substitution sub;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == vs.size()) {
      budget.charge();
      visit(sub);
      return;
    }
    for (const auto& g : universe) {
      sub.bind(vs[k], g);
      self(self, k + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace

GroundClassFamily gnd(const CongruenceClass& a, const Signature& sig, const Bound& bound,
                      std::size_t cap) {
  const std::vector<Term> universe = enumerate_ground_terms(sig, bound);
  GroundingBudget budget(cap);
  GroundClassFamily out;
  for_each_grounding(a.separating(), universe, budget, [&](const Substitution& sigma) {
    const Constraint gs = a.constraint().apply(sigma);
    if (!satisfiable(gs, bound)) return;
    std::vector<Term> members;
    for (const auto& s : a.terms()) {
      const Term ss = sigma.apply(s);
      // Variables of the constraint outside the term are existential, which
      // is exactly what satisfiability of the instantiated constraint checks.
      for_each_grounding(vars(ss), universe, budget, [&](const Substitution& delta) {
        if (satisfiable(gs.apply(delta), bound)) members.push_back(delta.apply(ss));
      });
    }
    std::sort(members.begin(), members.end(), TermLess{});
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty()) out.insert(std::move(members));
  });
  return out;
}

// ----------------------------------------------------------------- printing

std::string to_string(const CongruenceClass& a, const Signature& sig) {
  std::unordered_map<VarId, std::string> names;
  std::size_t next = 0;
  auto name_vars = [&](const Term& t, auto&& self) -> void {
    if (t.ground()) return;
    if (t.is_var()) {
      if (!names.count(t.var())) names.emplace(t.var(), "X" + std::to_string(++next));
      return;
    }
    for (const auto& arg : t.args()) self(arg, self);
  };
  for (const auto& t : a.terms()) name_vars(t, name_vars);
  for (const auto& t : a.constraint().atoms()) name_vars(t, name_vars);

  std::string out = "{" + to_string(a.constraint(), sig, &names) + " || ";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += to_string(a.terms()[i], sig, &names);
  }
  return out + "}";
}

}  // namespace ccx
