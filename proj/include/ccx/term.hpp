#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ccx {

using SymbolId = std::uint32_t;
using VarId = std::uint32_t;

struct Symbol {
  std::string name;
  unsigned arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Finite set of function symbols, indexed in declaration order.
class Signature {
 public:
  /// Adds a symbol, or returns the existing id when name and arity agree.
  /// Throws std::invalid_argument on an arity conflict.
  SymbolId add(std::string_view name, unsigned arity);

  std::optional<SymbolId> find(std::string_view name) const;
  const Symbol& operator[](SymbolId id) const { return symbols_.at(id); }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }

  std::vector<SymbolId> constants() const;
  std::vector<SymbolId> non_constants() const;

  /// Throws unless there is at least one constant and one non-constant.
  void validate() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
};

/// Immutable first-order term: a variable or a symbol applied to arguments.
/// Copies share structure; equality is structural.
class Term {
 public:
  Term() = default;

  static Term variable(VarId v);
  static Term apply(SymbolId f, std::vector<Term> args = {});

  bool valid() const { return node_ != nullptr; }
  bool is_var() const { return node_->is_var; }
  VarId var() const { return node_->head; }
  SymbolId symbol() const { return node_->head; }
  std::span<const Term> args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }

  /// Number of symbol and variable occurrences.
  std::size_t size() const { return node_->size; }
  bool ground() const { return node_->ground; }
  std::size_t hash() const { return node_->hash; }
  /// Largest variable id occurring in the term, or -1 when ground.
  std::int64_t max_var() const { return node_->max_var; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var = false;
    std::uint32_t head = 0;
    std::vector<Term> args;
    std::uint32_t size = 1;
    bool ground = true;
    std::size_t hash = 0;
    std::int64_t max_var = -1;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Total order: size first, then variables before applications, then ids,
/// then arguments left to right.
std::strong_ordering compare(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};
struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Sorted, duplicate-free set of variable ids.
using VarSet = std::vector<VarId>;

namespace varset {
void insert(VarSet& s, VarId v);
bool contains(const VarSet& s, VarId v);
VarSet unite(const VarSet& a, const VarSet& b);
VarSet intersect(const VarSet& a, const VarSet& b);
VarSet subtract(const VarSet& a, const VarSet& b);
bool disjoint(const VarSet& a, const VarSet& b);
}  // namespace varset

inline std::size_t size(const Term& t) { return t.size(); }
VarSet vars(const Term& t);
VarSet vars(std::span<const Term> ts);
void collect_vars(const Term& t, VarSet& out);
std::size_t occ_count(VarId x, const Term& t);

/// Finite map from variables to terms. Bindings are kept sorted by variable.
class Substitution {
 public:
  using Binding = std::pair<VarId, Term>;

  Substitution() = default;
  Substitution(std::initializer_list<Binding> init);

  const Term* find(VarId v) const;
  /// Adds or replaces a binding.
  void bind(VarId v, Term t);
  /// Copy without identity bindings x -> x.
  Substitution without_identities() const;
  void erase(VarId v);
  void clear() { bindings_.clear(); }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  VarSet domain() const;

  Term apply(const Term& t) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::vector<Binding> bindings_;
};

inline Term apply(const Substitution& s, const Term& t) { return s.apply(t); }
std::vector<Term> apply(const Substitution& s, std::span<const Term> ts);

/// Most general unifier with occurs check. The result is idempotent and
/// introduces no fresh variables; for a variable-variable pair the variable
/// with the larger id is bound to the other one.
std::optional<Substitution> mgu(const Term& s, const Term& t);

/// One idempotent substitution unifying every pair at once.
std::optional<Substitution> simultaneous_mgu(std::span<const std::pair<Term, Term>> pairs);

/// Returns delta with apply(delta, pattern) == target and
/// dom(delta) within vars(pattern).
std::optional<Substitution> match(const Term& pattern, const Term& target);

/// Extends `sub` so that pattern*sub == target. Only variables contained in
/// `bindable` may be bound (all pattern variables when `bindable` is null);
/// any other pattern variable must match itself. On failure `sub` is left in
/// an unspecified state.
bool match_into(const Term& pattern, const Term& target, Substitution& sub,
                const VarSet* bindable = nullptr);

/// Monotone fresh-variable allocator.
class FreshVars {
 public:
  explicit FreshVars(VarId next = 0) : next_(next) {}
  VarId fresh() { return next_++; }
  VarId peek() const { return next_; }
  /// Ensures future ids are strictly above `v`.
  void reserve_above(VarId v) {
    if (v >= next_) next_ = v + 1;
  }
  void reserve_above(const Term& t) {
    if (t.max_var() >= 0) reserve_above(static_cast<VarId>(t.max_var()));
  }

 private:
  VarId next_;
};

struct Renamed {
  std::vector<Term> terms;
  Substitution renaming;
};

/// Renames every variable of `ts` to a fresh id drawn from `fresh`, skipping
/// ids in `reserved`. The renaming is consistent across the collection.
Renamed rename_apart(std::span<const Term> ts, const VarSet& reserved, FreshVars& fresh);

/// Convenience form allocating above every id in `reserved` and in `ts`.
Renamed rename_apart(std::span<const Term> ts, const VarSet& reserved);

/// Builds a renaming for the variables in `vs` from `fresh`.
Substitution fresh_renaming(const VarSet& vs, FreshVars& fresh);

/// Renders a term; variables print as `x<id>` unless `var_names` maps them.
std::string to_string(const Term& t, const Signature& sig,
                      const std::unordered_map<VarId, std::string>* var_names = nullptr);

}  // namespace ccx

template <>
struct std::hash<ccx::Term> {
  std::size_t operator()(const ccx::Term& t) const noexcept { return t.hash(); }
};
