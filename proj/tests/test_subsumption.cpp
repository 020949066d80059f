#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ccx;
using ccx::testing::Lang;
using ccx::testing::Rng;

TEST_CASE("prefilter") {
  Lang L{{"a", 0}, {"f", 1}, {"g", 1}, {"h", 1}};
  auto general = L.cls({"g(X)", "h(X)"});
  CHECK_FALSE(prefilter(general, L.cls({"f(a)"})));
  CHECK(prefilter(L.cls({"Y", "g(Y)"}), L.cls({"f(a)"})));
  CHECK(prefilter(general, general));
}

TEST_CASE("subsumption by matching") {
  Lang L{{"a", 0}, {"b", 0}, {"f", 1}, {"g", 1}, {"h", 1}};
  const Bound bound = Bound::of_size(4);

  SUBCASE("merged class subsumes its instance") {
    auto b = L.cls({"g(X)", "h(X)"});
    auto a = L.cls({"g(h(Y))", "h(h(Y))"});
    CHECK(subsumes_by_matching(b, a, bound));
    auto sigma = subsumption_witness(b, a, bound);
    REQUIRE(sigma);
    CHECK(*sigma == Substitution{{L.var("X"), L("h(Y)")}});
    CHECK_FALSE(subsumes_by_matching(a, b, bound));
  }

  SUBCASE("incomplete on a gnd-equivalent pair") {
    auto a = L.cls({"f(X)", "g(a)", "g(b)"});
    auto b = L.cls({"f(a)", "f(b)", "g(Y)"});
    const Bound b2 = Bound::of_size(2);
    CHECK_FALSE(subsumes_by_matching(a, b, b2));
    CHECK_FALSE(subsumes_by_matching(b, a, b2));
    CHECK(ccx::testing::gnd_subsumes(a, b, L.sig, b2));
    CHECK(ccx::testing::gnd_subsumes(b, a, L.sig, b2));
  }

  SUBCASE("reflexive, also without renaming") {
    auto c = L.cls({"f(X)", "g(Y)", "h(h(X))"}, {"g(g(Y))"});
    CHECK(subsumes_by_matching(c, c, bound));
    FreshVars fresh(100);
    CHECK(subsumes_by_matching(c.renamed(fresh), c, bound));
  }

  SUBCASE("constraints must be implied") {
    // {f(x) || f(f(x))} admits fewer instances than {f(x) || f(x)}.
    auto narrow = L.cls({"f(X)"}, {"f(f(X))"});
    auto wide = L.cls({"f(Z)"});
    CHECK(subsumes_by_matching(wide, narrow, bound));
    CHECK_FALSE(subsumes_by_matching(narrow, wide, bound));
  }
}

TEST_CASE("random pairs: matching is sound and the prefilter never rejects") {
  Rng rng(31);
  int positives = 0, pairs = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    const Signature sig = ccx::testing::random_signature(rng, 2, 2);
    const Bound bound = Bound::of_size(2 + ccx::testing::pick(rng, 3));
    const CongruenceClass b = ccx::testing::random_class(rng, sig, 4, 0, 2);
    CongruenceClass a = ccx::testing::random_class(rng, sig, 4, 10, 2);
    // Bias towards related pairs: often take an instance of b.
    if (ccx::testing::coin(rng, 0.5)) {
      Substitution s;
      for (VarId v : b.vars())
        if (ccx::testing::coin(rng, 0.5)) s.bind(v, ccx::testing::random_term(rng, sig, 2, 0));
      FreshVars fresh(20);
      a = b.apply(s).renamed(fresh);
    }
    const bool m = subsumes_by_matching(b, a, bound);
    if (m) CHECK(prefilter(b, a));
    bool g;
    try {
      g = ccx::testing::gnd_subsumes(b, a, sig, bound);
    } catch (const BudgetExceeded&) {
      continue;
    }
    ++pairs;
    if (m) {
      ++positives;
      CHECK(g);
    }
  }
  CHECK(pairs >= 500);
  CHECK(positives >= 100);
}
