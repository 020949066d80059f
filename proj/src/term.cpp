#include "ccx/term.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ccx {

// ---------------------------------------------------------------- Signature

SymbolId Signature::add(std::string_view name, unsigned arity) {
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) {
    if (symbols_[it->second].arity != arity) {
      throw std::invalid_argument("symbol '" + std::string(name) + "' used with arity " +
                                  std::to_string(arity) + " and " +
                                  std::to_string(symbols_[it->second].arity));
    }
    return it->second;
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{std::string(name), arity});
  by_name_.emplace(std::string(name), id);
  return id;
}

std::optional<SymbolId> Signature::find(std::string_view name) const {
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) return it->second;
  return std::nullopt;
}

std::vector<SymbolId> Signature::constants() const {
  std::vector<SymbolId> out;
  for (SymbolId i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].arity == 0) out.push_back(i);
  return out;
}

std::vector<SymbolId> Signature::non_constants() const {
  std::vector<SymbolId> out;
  for (SymbolId i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].arity > 0) out.push_back(i);
  return out;
}

void Signature::validate() const {
  if (constants().empty()) throw std::invalid_argument("signature has no constant");
  if (non_constants().empty()) throw std::invalid_argument("signature has no non-constant symbol");
}

// --------------------------------------------------------------------- Term

namespace {
std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

Term Term::variable(VarId v) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->head = v;
  n->ground = false;
  n->hash = mix(0x51ed27, v);
  n->max_var = v;
  return Term(std::move(n));
}

Term Term::apply(SymbolId f, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->head = f;
  std::size_t h = mix(0xa5a5, f);
  std::uint32_t sz = 1;
  bool ground = true;
  std::int64_t mv = -1;
  for (const auto& a : args) {
    sz += static_cast<std::uint32_t>(a.size());
    ground = ground && a.ground();
    mv = std::max(mv, a.max_var());
    h = mix(h, a.hash());
  }
  n->args = std::move(args);
  n->size = sz;
  n->ground = ground;
  n->hash = h;
  n->max_var = mv;
  return Term(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.size() != b.size() || a.is_var() != b.is_var() ||
      a.node_->head != b.node_->head)
    return false;
  const auto& xa = a.node_->args;
  const auto& xb = b.node_->args;
  return std::equal(xa.begin(), xa.end(), xb.begin(), xb.end());
}

std::strong_ordering compare(const Term& a, const Term& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less
                                                  : std::strong_ordering::greater;
  if (a.is_var()) return a.var() <=> b.var();
  if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
  auto xa = a.args();
  auto xb = b.args();
  for (std::size_t i = 0; i < xa.size() && i < xb.size(); ++i)
    if (auto c = compare(xa[i], xb[i]); c != 0) return c;
  return xa.size() <=> xb.size();
}

// ------------------------------------------------------------------ VarSets

namespace varset {
void insert(VarSet& s, VarId v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) s.insert(it, v);
}
bool contains(const VarSet& s, VarId v) { return std::binary_search(s.begin(), s.end(), v); }
VarSet unite(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
VarSet intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
VarSet subtract(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
bool disjoint(const VarSet& a, const VarSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}
}  // namespace varset

void collect_vars(const Term& t, VarSet& out) {
  if (t.ground()) return;
  if (t.is_var()) {
    varset::insert(out, t.var());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

namespace {
void push_vars(const Term& t, std::vector<VarId>& out) {
  if (t.ground()) return;
  if (t.is_var()) {
    out.push_back(t.var());
    return;
  }
  for (const auto& a : t.args()) push_vars(a, out);
}
VarSet sorted_unique(std::vector<VarId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
}  // namespace

VarSet vars(const Term& t) {
  std::vector<VarId> out;
  push_vars(t, out);
  return sorted_unique(std::move(out));
}

VarSet vars(std::span<const Term> ts) {
  std::vector<VarId> out;
  for (const auto& t : ts) push_vars(t, out);
  return sorted_unique(std::move(out));
}

std::size_t occ_count(VarId x, const Term& t) {
  if (t.ground()) return 0;
  if (t.is_var()) return t.var() == x ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : t.args()) n += occ_count(x, a);
  return n;
}

// ------------------------------------------------------------- Substitution

Substitution::Substitution(std::initializer_list<Binding> init) {
  for (const auto& [v, t] : init) bind(v, t);
}

const Term* Substitution::find(VarId v) const {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                             [](const Binding& b, VarId x) { return b.first < x; });
  if (it != bindings_.end() && it->first == v) return &it->second;
  return nullptr;
}

void Substitution::bind(VarId v, Term t) {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                             [](const Binding& b, VarId x) { return b.first < x; });
  if (it != bindings_.end() && it->first == v) {
    it->second = std::move(t);
  } else {
    bindings_.insert(it, Binding{v, std::move(t)});
  }
}

void Substitution::erase(VarId v) {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                             [](const Binding& b, VarId x) { return b.first < x; });
  if (it != bindings_.end() && it->first == v) bindings_.erase(it);
}

Substitution Substitution::without_identities() const {
  Substitution out;
  for (const auto& [v, t] : bindings_)
    if (!(t.is_var() && t.var() == v)) out.bindings_.push_back({v, t});
  return out;
}

VarSet Substitution::domain() const {
  VarSet out;
  for (const auto& [v, t] : bindings_)
    if (!(t.is_var() && t.var() == v)) out.push_back(v);
  return out;
}

Term Substitution::apply(const Term& t) const {
  if (t.ground() || bindings_.empty()) return t;
  if (t.max_var() < static_cast<std::int64_t>(bindings_.front().first)) return t;
  if (t.is_var()) {
    const Term* b = find(t.var());
    return b ? *b : t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !(args.back() == a);
  }
  if (!changed) return t;
  return Term::apply(t.symbol(), std::move(args));
}

std::vector<Term> apply(const Substitution& s, std::span<const Term> ts) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(s.apply(t));
  return out;
}

// -------------------------------------------------------------- Unification

namespace {

bool occurs(VarId x, const Term& t) {
  if (t.ground()) return false;
  if (t.is_var()) return t.var() == x;
  for (const auto& a : t.args())
    if (occurs(x, a)) return true;
  return false;
}

void bind_composed(Substitution& sigma, VarId x, const Term& t) {
  Substitution single{{x, t}};
  Substitution next;
  for (const auto& [v, u] : sigma) next.bind(v, single.apply(u));
  next.bind(x, t);
  sigma = std::move(next);
}

}  // namespace

std::optional<Substitution> simultaneous_mgu(std::span<const std::pair<Term, Term>> pairs) {
  Substitution sigma;
  std::vector<std::pair<Term, Term>> work(pairs.begin(), pairs.end());
  while (!work.empty()) {
    auto [s, t] = std::move(work.back());
    work.pop_back();
    s = sigma.apply(s);
    t = sigma.apply(t);
    if (s == t) continue;
    if (s.is_var() && t.is_var()) {
      VarId hi = std::max(s.var(), t.var());
      VarId lo = std::min(s.var(), t.var());
      bind_composed(sigma, hi, Term::variable(lo));
    } else if (s.is_var()) {
      if (occurs(s.var(), t)) return std::nullopt;
      bind_composed(sigma, s.var(), t);
    } else if (t.is_var()) {
      if (occurs(t.var(), s)) return std::nullopt;
      bind_composed(sigma, t.var(), s);
    } else {
      if (s.symbol() != t.symbol() || s.arity() != t.arity()) return std::nullopt;
      for (std::size_t i = 0; i < s.arity(); ++i) work.emplace_back(s.args()[i], t.args()[i]);
    }
  }
  return sigma;
}

std::optional<Substitution> mgu(const Term& s, const Term& t) {
  std::pair<Term, Term> p{s, t};
  return simultaneous_mgu(std::span(&p, 1));
}

// ----------------------------------------------------------------- Matching

bool match_into(const Term& pattern, const Term& target, Substitution& sub,
                const VarSet* bindable) {
  if (pattern.is_var()) {
    VarId v = pattern.var();
    if (bindable && !varset::contains(*bindable, v)) return target == pattern;
    if (const Term* b = sub.find(v)) return *b == target;
    sub.bind(v, target);
    return true;
  }
  if (pattern.ground()) return pattern == target;
  if (target.is_var() || target.symbol() != pattern.symbol() ||
      target.arity() != pattern.arity() || target.size() < pattern.size())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.args()[i], target.args()[i], sub, bindable)) return false;
  return true;
}

std::optional<Substitution> match(const Term& pattern, const Term& target) {
  Substitution sub;
  if (!match_into(pattern, target, sub)) return std::nullopt;
  return sub.without_identities();
}

// ----------------------------------------------------------------- Renaming

Renamed rename_apart(std::span<const Term> ts, const VarSet& reserved, FreshVars& fresh) {
  Renamed out;
  for (VarId v : vars(ts)) {
    VarId id = fresh.fresh();
    while (varset::contains(reserved, id)) id = fresh.fresh();
    out.renaming.bind(v, Term::variable(id));
  }
  out.terms = ccx::apply(out.renaming, ts);
  return out;
}

Renamed rename_apart(std::span<const Term> ts, const VarSet& reserved) {
  FreshVars fresh;
  if (!reserved.empty()) fresh.reserve_above(reserved.back());
  for (const auto& t : ts) fresh.reserve_above(t);
  return rename_apart(ts, reserved, fresh);
}

Substitution fresh_renaming(const VarSet& vs, FreshVars& fresh) {
  Substitution out;
  for (VarId v : vs) out.bind(v, Term::variable(fresh.fresh()));
  return out;
}

// ---------------------------------------------------------------- Printing

namespace {
void render(const Term& t, const Signature& sig,
            const std::unordered_map<VarId, std::string>* names, std::string& out) {
  if (t.is_var()) {
    if (names) {
      if (auto it = names->find(t.var()); it != names->end()) {
        out += it->second;
        return;
      }
    }
    out += "x" + std::to_string(t.var());
    return;
  }
  out += sig[t.symbol()].name;
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    render(t.args()[i], sig, names, out);
  }
  out += ')';
}
}  // namespace

std::string to_string(const Term& t, const Signature& sig,
                      const std::unordered_map<VarId, std::string>* var_names) {
  std::string out;
  render(t, sig, var_names, out);
  return out;
}

}  // namespace ccx
