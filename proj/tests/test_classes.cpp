#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ccx;
using ccx::testing::Lang;
using ccx::testing::Rng;

namespace {

GroundClassFamily family(std::initializer_list<std::vector<Term>> blocks) {
  GroundClassFamily out;
  for (auto b : blocks) {
    std::sort(b.begin(), b.end(), TermLess{});
    out.insert(b);
  }
  return out;
}

bool m_constrained_by_scan(const CongruenceClass& c) {
  for (const auto& t : c.terms()) {
    bool covered = false;
    for (const auto& a : c.constraint().atoms()) {
      if (a.size() < t.size()) continue;
      bool same_profile = true;
      for (VarId v : varset::unite(vars(a), vars(t)))
        if (occ_count(v, a) != occ_count(v, t)) same_profile = false;
      covered = covered || same_profile;
    }
    if (!covered) return false;
  }
  return true;
}

/// Some s', t' in norm(A) and one substitution with s'σ = s, t'σ = t
/// leaving the normal constraint satisfiable.
bool embeds(const CongruenceClass& normal, const Term& s, const Term& t, const Bound& bound) {
  for (const auto& a : normal.terms())
    for (const auto& b : normal.terms()) {
      Substitution sigma;
      if (!match_into(a, s, sigma) || !match_into(b, t, sigma)) continue;
      // Unbound variables take the smallest size, as satisfiable() does.
      if (satisfiable(normal.constraint().apply(sigma), bound)) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("make_class") {
  Lang L{{"a", 0}, {"f", 1}, {"g", 1}, {"h", 1}};
  auto c = L.cls({"g(X)", "h(X)"});
  CHECK(c.terms().size() == 2);
  // g(X) and h(X) have one occurrence profile, so one atom covers both.
  CHECK(c.constraint() == reduce_atoms(L.atoms({"g(X)", "h(X)"})));
  CHECK(c.constraint().size() == 1);
  auto ca = L.cls({"a"});
  CHECK(ca.constraint() == L.atoms({"a"}));
  auto single = L.cls({"f(X1)"});
  CHECK(single.constraint() == L.atoms({"f(X1)"}));
  CHECK_THROWS_AS(make_class({}), std::invalid_argument);
  // Duplicate terms collapse.
  CHECK(L.cls({"g(X)", "g(X)"}).size() == 1);
}

TEST_CASE("separating and free variables") {
  Lang L{{"a", 0}, {"f", 1}, {"g", 1}, {"h", 1}};
  auto c = L.cls({"g(X)", "h(X)"});
  CHECK(c.separating() == VarSet{L.var("X")});
  CHECK(c.free().empty());
  auto b = L.cls({"g(Y)", "h(Z)"});
  CHECK(b.separating().empty());
  CHECK(b.free() == VarSet{L.var("Y"), L.var("Z")});
  auto ca = L.cls({"a"});
  CHECK(ca.separating().empty());
  CHECK(ca.free().empty());
  auto with_extra = L.cls({"a"}, {"f(U)"});
  CHECK(with_extra.separating().empty());
  CHECK(with_extra.free().empty());
  CHECK(with_extra.constraint_only_vars() == VarSet{L.var("U")});
  const auto sf = separating_free_vars(b);
  CHECK(sf.separating == b.separating());
  CHECK(sf.free == b.free());
}

TEST_CASE("normalize") {
  Lang L{{"a", 0}, {"f", 1}, {"g", 1}, {"h", 1}};
  FreshVars fresh(100);
  auto b = normalize(L.cls({"g(X)", "h(Y)"}), fresh);
  REQUIRE(b.size() == 4);
  std::map<SymbolId, int> tops;
  for (const auto& t : b.terms()) tops[t.symbol()]++;
  CHECK(tops[*L.sig.find("g")] == 2);
  CHECK(tops[*L.sig.find("h")] == 2);
  CHECK(b.constraint().size() == 4);

  auto unchanged = L.cls({"g(Z)", "h(Z)"});
  CHECK(normalize(unchanged, fresh) == unchanged);

  auto mixed = normalize(L.cls({"a", "f(W)"}), fresh);
  CHECK(mixed.size() == 3);
}

TEST_CASE("gnd") {
  Lang L{{"a", 0}, {"b", 0}, {"g", 1}, {"h", 1}};
  const Bound b2 = Bound::of_size(2);
  CHECK(gnd(L.cls({"g(X)", "h(X)"}), L.sig, b2) ==
        family({L.terms({"g(a)", "h(a)"}), L.terms({"g(b)", "h(b)"})}));
  CHECK(gnd(L.cls({"g(Y)", "h(Z)"}), L.sig, b2) ==
        family({L.terms({"g(a)", "h(a)", "g(b)", "h(b)"})}));
  CHECK(gnd(L.cls({"a"}), L.sig, b2) == family({L.terms({"a"})}));
  CHECK_THROWS_AS(gnd(L.cls({"g(X)", "h(Y)"}), L.sig, Bound::of_size(12), 1000), BudgetExceeded);
}

TEST_CASE("condense") {
  Lang L{{"a", 0}, {"b", 0}, {"f", 1}, {"g", 1}, {"h", 1}};
  const Bound bound = Bound::of_size(4);
  auto c = condense(L.cls({"f(X)", "f(Y)", "f(Z)"}), bound);
  CHECK(c.size() == 2);
  CHECK(c.free().size() == 2);
  auto keep = L.cls({"g(X)", "h(X)"});
  CHECK(condense(keep, bound) == keep);

  // Whether f(a) may go is decided under the constraint; in every case the
  // ground meaning stays put.
  auto fx_fa = L.cls({"f(X)", "f(a)"});
  auto cf = condense(fx_fa, bound);
  CHECK(gnd(cf, L.sig, bound) == gnd(fx_fa, L.sig, bound));
}

TEST_CASE("collapse_constraint_vars") {
  Lang L{{"a", 0}, {"f", 1}, {"g", 1}};
  FreshVars fresh(50);
  auto c = collapse_constraint_vars(L.cls({"a"}, {"f(U)", "g(V)"}), fresh);
  const VarSet vs = c.constraint_only_vars();
  REQUIRE(vs.size() == 1);
  const Term y = Term::variable(vs[0]);
  CHECK(c.constraint() == reduce_atoms(Constraint({L("a"), Term::apply(*L.sig.find("f"), {y}),
                                                   Term::apply(*L.sig.find("g"), {y})})));
  auto plain = L.cls({"f(X)"});
  CHECK(collapse_constraint_vars(plain, fresh) == plain);
  auto single = collapse_constraint_vars(L.cls({"a"}, {"f(U)"}), fresh);
  CHECK(single.constraint_only_vars().size() == 1);
}

TEST_CASE("rendering") {
  Lang L{{"a", 0}, {"g", 1}, {"h", 1}};
  CHECK(to_string(L.cls({"g(Y)", "h(Y)"}), L.sig) == "{g(X1) || g(X1), h(X1)}");
}

TEST_CASE("transformers preserve ground meaning") {
  Rng rng(23);
  int checked = 0;
  for (int iter = 0; iter < 400; ++iter) {
    const Signature sig = ccx::testing::random_signature(rng, 2, 2);
    const Bound bound = Bound::of_size(2 + ccx::testing::pick(rng, 3));
    const CongruenceClass c = ccx::testing::random_class(rng, sig, 4, 0, 3);
    FreshVars fresh(100);
    const CongruenceClass n = normalize(c, fresh);
    const CongruenceClass k = condense(c, bound);
    const CongruenceClass z = collapse_constraint_vars(c, fresh);
    for (const auto* x : {&c, &n, &k, &z}) {
      CHECK(m_constrained_by_scan(*x));
      CHECK(is_m_constrained(*x));
      // Caches match a recomputation.
      const auto ts = x->terms();
      VarSet inter = vars(ts[0]), all;
      for (const auto& t : ts) {
        inter = varset::intersect(inter, vars(t));
        all = varset::unite(all, vars(t));
      }
      CHECK(x->separating() == inter);
      CHECK(x->free() == varset::subtract(all, inter));
    }
    GroundClassFamily g;
    try {
      g = gnd(c, sig, bound);
    } catch (const BudgetExceeded&) {
      continue;
    }
    ++checked;
    CHECK(gnd(n, sig, bound) == g);
    CHECK(gnd(k, sig, bound) == g);
    CHECK(gnd(z, sig, bound) == g);

    // Normal-class instance property over all pairs of ground terms.
    const auto universe = enumerate_ground_terms(sig, bound);
    if (universe.size() > 40) continue;
    for (const auto& s : universe)
      for (const auto& t : universe) {
        const bool in_gnd = std::any_of(g.begin(), g.end(), [&](const std::vector<Term>& block) {
          return std::binary_search(block.begin(), block.end(), s, TermLess{}) &&
                 std::binary_search(block.begin(), block.end(), t, TermLess{});
        });
        CHECK(in_gnd == embeds(n, s, t, bound));
      }
  }
  CHECK(checked > 200);
}
