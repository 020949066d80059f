#include "ccx/subsumption.hpp"

#include <algorithm>

namespace ccx {

bool prefilter(const CongruenceClass& general, const CongruenceClass& instance) {
  if (general.has_variable_term()) return true;
  if (instance.has_variable_term()) return false;
  return general.top_symbols().covers(instance.top_symbols());
}

namespace {

/// For each instance term, the general terms it is an instance of.
using Candidates = std::vector<std::vector<const Term*>>;

/// Every instance term is matched by some general term under sigma extended
/// by a tau on the free variables, with the instance constraint implying
/// the general constraint under sigma*tau.
bool free_variable_phase(const CongruenceClass& general, const CongruenceClass& instance,
                         const Candidates& candidates, const std::vector<VarSet>& atom_vars,
                         const Substitution& sigma, const ImplicationChecker& premise) {
  // sigma binds every separating variable, so seeding the matcher with it
  // leaves only free variables to bind.
  const VarSet& term_vars = general.term_vars();
  const auto& atoms = general.constraint().atoms();
  // tau only adds bindings for variables of the matched term; atoms free of
  // those read the same under sigma and are decided once.
  std::vector<signed char> under_sigma(atoms.size(), -1);
  auto holds_under_sigma = [&](std::size_t k) {
    if (under_sigma[k] < 0) under_sigma[k] = premise.implies_atom(sigma.apply(atoms[k])) ? 1 : 0;
    return under_sigma[k] == 1;
  };
  Substitution tau;
  const auto terms = instance.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    bool covered = false;
    for (const Term* s : candidates[i]) {
      tau = sigma;
      if (!match_into(*s, terms[i], tau, &term_vars)) continue;
      const VarSet own = varset::subtract(vars(*s), general.separating());
      bool ok = true;
      for (std::size_t k = 0; k < atoms.size() && ok; ++k)
        ok = varset::disjoint(atom_vars[k], own) ? holds_under_sigma(k)
                                                 : premise.implies_atom(tau.apply(atoms[k]));
      if (ok) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

std::optional<Substitution> witness(const CongruenceClass& general,
                                    const CongruenceClass& instance, const Bound& bound) {
  const VarSet& general_vars = general.term_vars();
  // Structural filter first: each instance term needs some generalization.
  const auto terms = instance.terms();
  // General terms by top symbol; bare variables match anything.
  std::vector<std::pair<SymbolId, const Term*>> by_top;
  std::vector<const Term*> variables;
  for (const auto& s : general.terms()) {
    if (s.is_var())
      variables.push_back(&s);
    else
      by_top.emplace_back(s.symbol(), &s);
  }
  std::stable_sort(by_top.begin(), by_top.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  Candidates candidates(terms.size());
  std::size_t pivot = 0;
  Substitution d;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Term& t = terms[i];
    if (!t.is_var()) {
      auto lo = std::lower_bound(by_top.begin(), by_top.end(), t.symbol(),
                                 [](const auto& x, SymbolId f) { return x.first < f; });
      for (; lo != by_top.end() && lo->first == t.symbol(); ++lo) {
        const Term& s = *lo->second;
        if (s.ground() ? s == t : (d.clear(), match_into(s, t, d, &general_vars)))
          candidates[i].push_back(&s);
      }
    }
    for (const Term* s : variables) candidates[i].push_back(s);
    if (candidates[i].empty()) return std::nullopt;
    if (candidates[i].size() < candidates[pivot].size()) pivot = i;
  }

  const ImplicationChecker premise(instance.constraint(), bound);
  std::vector<VarSet> atom_vars;
  for (const auto& a : general.constraint().atoms()) atom_vars.push_back(vars(a));
  const VarSet& sep = general.separating();
  if (sep.empty()) {
    if (free_variable_phase(general, instance, candidates, atom_vars, {}, premise)) return Substitution{};
    return std::nullopt;
  }

  // Separating variables occur in every general term, so a matcher onto any
  // one instance term fixes sigma completely. Candidates from the instance
  // term with the fewest generalizations are therefore exhaustive.
  std::vector<Substitution> tried;
  for (const Term* s : candidates[pivot]) {
    Substitution m;
    match_into(*s, terms[pivot], m, &general_vars);
    Substitution sigma;
    for (const auto& [v, u] : m)
      if (varset::contains(sep, v)) sigma.bind(v, u);
    if (std::find(tried.begin(), tried.end(), sigma) != tried.end()) continue;
    if (free_variable_phase(general, instance, candidates, atom_vars, sigma, premise)) return sigma;
    tried.push_back(std::move(sigma));
  }
  return std::nullopt;
}

}  // namespace

std::optional<Substitution> subsumption_witness(const CongruenceClass& general,
                                                const CongruenceClass& instance,
                                                const Bound& bound) {
  if (!prefilter(general, instance)) return std::nullopt;
  if (varset::disjoint(general.vars(), instance.vars())) return witness(general, instance, bound);
  FreshVars fresh;
  if (instance.max_var() >= 0) fresh.reserve_above(static_cast<VarId>(instance.max_var()));
  if (general.max_var() >= 0) fresh.reserve_above(static_cast<VarId>(general.max_var()));
  return witness(general.renamed(fresh), instance, bound);
}

bool subsumes_by_matching(const CongruenceClass& general, const CongruenceClass& instance,
                          const Bound& bound) {
  return subsumption_witness(general, instance, bound).has_value();
}

}  // namespace ccx
