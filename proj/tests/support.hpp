#pragma once

// Shared helpers for the test executables: a tiny term DSL, random
// generators and brute-force oracles that avoid the code under test.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ccx/classes.hpp"
#include "ccx/constraint.hpp"
#include "ccx/engine.hpp"
#include "ccx/frontend.hpp"
#include "ccx/ground_cc.hpp"
#include "ccx/subsumption.hpp"
#include "ccx/term.hpp"

namespace ccx::testing {

/// Signature plus one variable scope: "g(X)" and "h(X)" share X.
struct Lang {
  Signature sig;
  VarScope scope;

  Lang(std::initializer_list<std::pair<const char*, unsigned>> symbols) {
    for (const auto& [name, arity] : symbols) sig.add(name, arity);
  }
  Term operator()(std::string_view text) {
    const std::size_t before = sig.size();
    Term t = parse_term(text, sig, scope);
    if (sig.size() != before) throw std::invalid_argument("undeclared symbol in " + std::string(text));
    return t;
  }
  std::vector<Term> terms(std::initializer_list<std::string_view> texts) {
    std::vector<Term> out;
    for (auto t : texts) out.push_back((*this)(t));
    return out;
  }
  Constraint atoms(std::initializer_list<std::string_view> texts) { return Constraint(terms(texts)); }
  CongruenceClass cls(std::initializer_list<std::string_view> texts,
                      std::initializer_list<std::string_view> extra = {}) {
    return make_class(terms(texts), atoms(extra));
  }
  VarId var(std::string_view name) { return (*this)(name).var(); }
  std::string str(const Term& t) const { return to_string(t, sig); }
};

// ------------------------------------------------------------- random input

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// 1-2 constants plus 1..max_fun function symbols of arity 1..max_arity.
inline Signature random_signature(Rng& rng, std::size_t max_fun = 3, unsigned max_arity = 2,
                                  std::size_t max_const = 2) {
  Signature sig;
  const std::size_t constants = 1 + pick(rng, max_const);
  for (std::size_t i = 0; i < constants; ++i) sig.add(std::string(1, char('a' + i)), 0);
  const std::size_t funs = 1 + pick(rng, max_fun);
  for (std::size_t i = 0; i < funs; ++i)
    sig.add(std::string(1, char('f' + i)), 1 + static_cast<unsigned>(pick(rng, max_arity)));
  return sig;
}

/// Random term of size at most `max_size` with variables from 0..vars-1.
inline Term random_term(Rng& rng, const Signature& sig, std::size_t max_size, VarId vars,
                        double var_prob = 0.3) {
  std::vector<SymbolId> fitting;
  for (SymbolId f = 0; f < sig.size(); ++f)
    if (sig[f].arity == 0 || sig[f].arity + 1 <= max_size) fitting.push_back(f);
  if (vars > 0 && coin(rng, var_prob)) return Term::variable(static_cast<VarId>(pick(rng, vars)));
  const SymbolId f = fitting[pick(rng, fitting.size())];
  const unsigned n = sig[f].arity;
  std::vector<Term> args;
  std::size_t budget = max_size - 1;
  for (unsigned i = 0; i < n; ++i) {
    const std::size_t reserve = n - i - 1;
    const std::size_t here = 1 + pick(rng, budget - reserve);
    Term a = random_term(rng, sig, here, vars, var_prob);
    budget -= a.size();
    args.push_back(std::move(a));
  }
  return Term::apply(f, std::move(args));
}

/// A class of 1-3 random terms (with at least one variable-free attempt
/// avoided) plus up to one extra random atom.
inline CongruenceClass random_class(Rng& rng, const Signature& sig, std::size_t max_size,
                                    VarId first_var, VarId vars) {
  const std::size_t n = 1 + pick(rng, 3);
  std::vector<Term> terms;
  Substitution shift;
  for (VarId v = 0; v < vars; ++v) shift.bind(v, Term::variable(first_var + v));
  for (std::size_t i = 0; i < n; ++i) terms.push_back(shift.apply(random_term(rng, sig, max_size, vars)));
  Constraint extra;
  if (coin(rng, 0.3)) extra.add(shift.apply(random_term(rng, sig, max_size, vars)));
  return make_class(std::move(terms), extra);
}

/// A small random equational problem with |T_{<=limit}| <= max_universe.
struct Instance {
  Signature sig;
  EquationSet eqs;
  Bound bound;
};

inline Instance random_instance(Rng& rng, std::size_t max_universe = 200, unsigned max_depth = 3) {
  while (true) {
    Instance in;
    in.sig = random_signature(rng, 3, 2, 2);
    const unsigned depth = 1 + static_cast<unsigned>(pick(rng, max_depth));
    in.bound = Bound::from_beta(build_beta(in.sig, depth));
    if (enumerate_ground_terms(in.sig, in.bound).size() > max_universe) continue;
    const std::size_t n = 1 + pick(rng, 3);
    for (std::size_t i = 0; i < n; ++i)
      in.eqs.emplace_back(random_term(rng, in.sig, in.bound.limit, 2),
                          random_term(rng, in.sig, in.bound.limit, 2));
    return in;
  }
}

// ------------------------------------------------------------------ oracles

/// A ground term of exactly `k` symbols, built from the first constant and
/// the first unary (or wider) symbol.
inline Term term_of_size(const Signature& sig, std::size_t k) {
  const SymbolId c = sig.constants().front();
  const SymbolId f = sig.non_constants().front();
  const unsigned n = sig[f].arity;
  if (k == 1) return Term::apply(c);
  if (k < n + 1) return Term();
  std::vector<Term> args(n, Term::apply(c));
  args[0] = term_of_size(sig, k - n);
  if (!args[0].valid()) return Term();
  return Term::apply(f, std::move(args));
}

/// Value of the linear abstraction of `atom` at a variable assignment.
inline bool lic_holds(const Term& atom, const Bound& bound, const std::map<VarId, std::int64_t>& value) {
  // Computed directly from the definition: size with variables weighted.
  std::function<std::int64_t(const Term&)> weighted = [&](const Term& t) -> std::int64_t {
    if (t.is_var()) return value.at(t.var());
    std::int64_t s = 1;
    for (const auto& a : t.args()) s += weighted(a);
    return s;
  };
  return weighted(atom) <= static_cast<std::int64_t>(bound.limit);
}

/// Forall assignments of lhs variables in 1..limit satisfying lhs, there
/// are values in 1..limit for the remaining rhs variables satisfying rhs.
inline bool brute_implies(const Constraint& lhs, const Constraint& rhs, const Bound& bound) {
  const VarSet outer = lhs.vars();
  const VarSet inner = varset::subtract(rhs.vars(), outer);
  const auto limit = static_cast<std::int64_t>(bound.limit);
  std::map<VarId, std::int64_t> value;
  auto all_hold = [&](const Constraint& c) {
    return std::all_of(c.atoms().begin(), c.atoms().end(),
                       [&](const Term& a) { return lic_holds(a, bound, value); });
  };
  std::function<bool(std::size_t)> exists_inner = [&](std::size_t k) -> bool {
    if (k == inner.size()) return all_hold(rhs);
    for (std::int64_t x = 1; x <= limit; ++x) {
      value[inner[k]] = x;
      if (exists_inner(k + 1)) return true;
    }
    return false;
  };
  std::function<bool(std::size_t)> forall_outer = [&](std::size_t k) -> bool {
    if (k == outer.size()) return !all_hold(lhs) || exists_inner(0);
    for (std::int64_t x = 1; x <= limit; ++x) {
      value[outer[k]] = x;
      if (!forall_outer(k + 1)) return false;
    }
    return true;
  };
  return forall_outer(0);
}

/// Subsumption by the ground semantics: every ground class of `a` is
/// contained in some ground class of `b`.
inline bool gnd_subsumes(const CongruenceClass& b, const CongruenceClass& a, const Signature& sig,
                         const Bound& bound) {
  const auto gb = gnd(b, sig, bound);
  const auto ga = gnd(a, sig, bound);
  for (const auto& block : ga) {
    bool contained = std::any_of(gb.begin(), gb.end(), [&](const std::vector<Term>& big) {
      return std::includes(big.begin(), big.end(), block.begin(), block.end(), TermLess{});
    });
    if (!contained) return false;
  }
  return true;
}

/// Ground terms of size <= limit by naive closure: start from constants
/// and apply symbols until nothing new fits. Independent of the layered
/// enumerator in the library.
inline std::vector<Term> naive_universe(const Signature& sig, std::size_t limit) {
  std::vector<Term> all;
  for (SymbolId f = 0; f < sig.size(); ++f)
    if (sig[f].arity == 0) all.push_back(Term::apply(f));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Term> snapshot = all;
    for (SymbolId f = 0; f < sig.size(); ++f) {
      const unsigned n = sig[f].arity;
      if (n == 0) continue;
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        std::vector<Term> args;
        std::size_t size = 1;
        for (auto i : idx) {
          args.push_back(snapshot[i]);
          size += snapshot[i].size();
        }
        if (size <= limit) {
          Term t = Term::apply(f, std::move(args));
          if (std::find(all.begin(), all.end(), t) == all.end()) {
            all.push_back(t);
            grew = true;
          }
        }
        std::size_t k = 0;
        while (k < n && ++idx[k] == snapshot.size()) idx[k++] = 0;
        if (k == n) break;
      }
    }
  }
  std::sort(all.begin(), all.end(), TermLess{});
  return all;
}

/// Brute-force grounding of equations over a given universe: all variable
/// assignments into the universe, kept when both sides stay within limit.
inline EquationSet naive_ground_equations(const EquationSet& eqs, const std::vector<Term>& universe,
                                          std::size_t limit) {
  EquationSet out;
  for (const auto& [l, r] : eqs) {
    const VarSet vs = vars(std::vector<Term>{l, r});
    Substitution sigma;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == vs.size()) {
        Term gl = sigma.apply(l), gr = sigma.apply(r);
        if (gl.size() <= limit && gr.size() <= limit) out.emplace_back(gl, gr);
        return;
      }
      for (const auto& g : universe) {
        sigma.bind(vs[k], g);
        rec(k + 1);
      }
    };
    rec(0);
  }
  return out;
}

}  // namespace ccx::testing
