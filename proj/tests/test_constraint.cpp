#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ccx;
using ccx::testing::Lang;
using ccx::testing::Rng;

namespace {

LinearConstraint expect_lic(std::initializer_list<std::pair<VarId, std::int64_t>> coeffs, std::int64_t rhs) {
  return LinearConstraint{{coeffs.begin(), coeffs.end()}, rhs};
}

bool same(const LinearConstraint& a, const LinearConstraint& b) {
  return a.coeffs == b.coeffs && a.rhs == b.rhs;
}

}  // namespace

TEST_CASE("lic examples") {
  Lang L{{"a", 0}, {"g", 1}, {"i", 2}};
  const Bound b7 = Bound::of_size(7);
  const VarId x = L.var("X");
  CHECK(same(lic(L("g(X)"), b7), expect_lic({{x, 1}}, 6)));
  CHECK(same(lic(L("i(X,X)"), b7), expect_lic({{x, 2}}, 6)));
  CHECK(same(lic(L("a"), b7), expect_lic({}, 6)));
  CHECK(lic(L("a"), b7).satisfiable());
}

TEST_CASE("satisfiable") {
  Lang L{{"a", 0}, {"g", 1}};
  CHECK(satisfiable(L.atoms({"g(X)"}), Bound::of_size(7)));
  CHECK_FALSE(satisfiable(L.atoms({"g(g(a))"}), Bound::of_size(2)));
  CHECK(satisfiable(Constraint{}, Bound::of_size(1)));
}

TEST_CASE("implies examples") {
  Lang L{{"a", 0}, {"f", 1}};
  CHECK(implies(L.atoms({"f(f(X))"}), L.atoms({"f(X)"}), Bound::of_size(7)));
  CHECK_FALSE(implies(L.atoms({"f(X)"}), L.atoms({"f(f(X))"}), Bound::of_size(3)));
  CHECK(implies(L.atoms({"f(X)"}), Constraint{}, Bound::of_size(3)));
  // Right-hand variables unknown to the premise are existential.
  CHECK(implies(Constraint{}, L.atoms({"f(Z)"}), Bound::of_size(3)));
  CHECK_FALSE(implies(Constraint{}, L.atoms({"f(f(Z))"}), Bound::of_size(2)));
  // An unsatisfiable premise implies anything.
  CHECK(implies(L.atoms({"f(f(f(a)))"}), L.atoms({"f(f(f(f(a))))"}), Bound::of_size(3)));
}

TEST_CASE("reduce_atoms") {
  Lang L{{"a", 0}, {"f", 1}, {"g", 1}};
  CHECK(reduce_atoms(L.atoms({"f(X)", "f(g(X))"})) == L.atoms({"f(g(X))"}));
  CHECK(reduce_atoms(L.atoms({"a", "f(a)"})) == L.atoms({"f(a)"}));
  CHECK(reduce_atoms(L.atoms({"g(X)"})) == L.atoms({"g(X)"}));
  // Different occurrence profiles both stay.
  CHECK(reduce_atoms(L.atoms({"f(X)", "g(Y)"})).size() == 2);
}

TEST_CASE("enumerate_ground_terms") {
  Lang L{{"a", 0}, {"f", 1}};
  CHECK(enumerate_ground_terms(L.sig, Bound::of_size(3)) == L.terms({"a", "f(a)", "f(f(a))"}));
  Lang P{{"a", 0}, {"i", 2}};
  CHECK(enumerate_ground_terms(P.sig, Bound::of_size(3)) == P.terms({"a", "i(a,a)"}));
  Lang Q{{"a", 0}, {"b", 0}, {"f", 1}, {"g", 2}};
  CHECK(enumerate_ground_terms(Q.sig, Bound::of_size(1)) == Q.terms({"a", "b"}));
}

TEST_CASE("enumeration agrees with an independent count and closure") {
  Rng rng(3);
  for (int iter = 0; iter < 60; ++iter) {
    const Signature sig = ccx::testing::random_signature(rng);
    const std::size_t limit = 1 + ccx::testing::pick(rng, 6);
    const auto terms = enumerate_ground_terms(sig, Bound::of_size(limit));
    CHECK(terms == ccx::testing::naive_universe(sig, limit));

    // count[k] = number of ground terms of size exactly k.
    std::vector<std::uint64_t> count(limit + 1, 0);
    for (std::size_t k = 1; k <= limit; ++k)
      for (SymbolId f = 0; f < sig.size(); ++f) {
        const unsigned n = sig[f].arity;
        // ways[j] = tuples of the first i arguments with total size j
        std::vector<std::uint64_t> ways(k, 0);
        ways[0] = 1;
        for (unsigned i = 0; i < n; ++i) {
          std::vector<std::uint64_t> next(k, 0);
          for (std::size_t j = 0; j < k; ++j)
            for (std::size_t s = 1; j + s < k; ++s) next[j + s] += ways[j] * count[s];
          ways = next;
        }
        count[k] += ways[k - 1];
      }
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= limit; ++k) total += count[k];
    CHECK(terms.size() == total);

    std::unordered_set<Term, TermHash> set(terms.begin(), terms.end());
    for (const auto& t : terms)
      for (const auto& a : t.args()) CHECK(set.count(a) == 1);
  }
}

TEST_CASE("lic is exact in both directions") {
  Rng rng(17);
  int witnesses = 0;
  for (int iter = 0; iter < 1500; ++iter) {
    const Signature sig = ccx::testing::random_signature(rng);
    const std::size_t limit = 2 + ccx::testing::pick(rng, 7);
    const Bound bound = Bound::of_size(limit);
    const Term t = ccx::testing::random_term(rng, sig, 6, 3, 0.4);
    const LinearConstraint l = lic(t, bound);
    const VarSet vs = vars(t);

    // Direction 1: a ground instance within the bound satisfies lic at the
    // sizes of the substituted terms.
    Substitution sigma;
    for (VarId v : vs) sigma.bind(v, ccx::testing::random_term(rng, sig, 4, 0));
    if (sigma.apply(t).size() <= limit)
      CHECK(l.holds([&](VarId v) { return static_cast<std::int64_t>(sigma.find(v)->size()); }));

    // Direction 2: an assignment satisfying lic is realized by ground terms
    // of those sizes, and the instance lies within the bound.
    std::map<VarId, std::int64_t> value;
    for (VarId v : vs) value[v] = 1 + static_cast<std::int64_t>(ccx::testing::pick(rng, limit));
    if (l.holds([&](VarId v) { return value.at(v); })) {
      Substitution delta;
      bool realizable = true;
      for (VarId v : vs) {
        Term w = ccx::testing::term_of_size(sig, static_cast<std::size_t>(value[v]));
        if (!w.valid()) realizable = false;
        else delta.bind(v, w);
      }
      if (realizable) {
        ++witnesses;
        CHECK(delta.apply(t).size() <= limit);
      }
    }
  }
  CHECK(witnesses > 200);
}

TEST_CASE("implies agrees with brute force") {
  Rng rng(5);
  for (int iter = 0; iter < 1500; ++iter) {
    const Signature sig = ccx::testing::random_signature(rng);
    const Bound bound = Bound::of_size(2 + ccx::testing::pick(rng, 6));
    Constraint lhs, rhs;
    const std::size_t nl = ccx::testing::pick(rng, 3), nr = 1 + ccx::testing::pick(rng, 2);
    for (std::size_t i = 0; i < nl; ++i) lhs.add(ccx::testing::random_term(rng, sig, 6, 3, 0.4));
    for (std::size_t i = 0; i < nr; ++i) rhs.add(ccx::testing::random_term(rng, sig, 6, 3, 0.4));
    const bool expected = ccx::testing::brute_implies(lhs, rhs, bound);
    CHECK(implies(lhs, rhs, bound) == expected);
    CHECK(ImplicationChecker(lhs, bound).implies(rhs) == expected);
    // reduce_atoms keeps the meaning on both sides.
    CHECK(implies(reduce_atoms(lhs), rhs, bound) == expected);
    CHECK(implies(lhs, reduce_atoms(rhs), bound) == expected);
    CHECK(satisfiable(reduce_atoms(lhs), bound) == satisfiable(lhs, bound));
  }
}
