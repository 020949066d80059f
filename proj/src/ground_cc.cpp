#include "ccx/ground_cc.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ccx {

// ---------------------------------------------------------- GroundPartition

GroundPartition::GroundPartition(std::vector<Term> universe,
                                 const std::vector<std::size_t>& labels)
    : universe_(std::move(universe)) {
  if (labels.size() != universe_.size())
    throw std::invalid_argument("partition labels do not match the universe");
  std::unordered_map<std::size_t, std::size_t> first;
  labels_.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = first.emplace(labels[i], i);
    labels_[i] = it->second;
    position_.emplace(universe_[i], i);
  }
}

std::optional<std::size_t> GroundPartition::index_of(const Term& t) const {
  auto it = position_.find(t);
  if (it == position_.end()) return std::nullopt;
  return it->second;
}

bool GroundPartition::same(const Term& a, const Term& b) const {
  auto i = index_of(a), j = index_of(b);
  if (!i || !j) throw std::invalid_argument("term outside the partition universe");
  return labels_[*i] == labels_[*j];
}

std::vector<std::vector<Term>> GroundPartition::blocks() const {
  std::map<std::size_t, std::vector<Term>> by_label;
  for (std::size_t i = 0; i < universe_.size(); ++i) by_label[labels_[i]].push_back(universe_[i]);
  std::vector<std::vector<Term>> out;
  out.reserve(by_label.size());
  for (auto& [label, members] : by_label) out.push_back(std::move(members));
  return out;
}

std::size_t GroundPartition::blocks_total() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) n += labels_[i] == i;
  return n;
}

std::size_t GroundPartition::blocks_nonsingleton() const {
  std::vector<std::size_t> count(labels_.size(), 0);
  for (auto l : labels_) ++count[l];
  return static_cast<std::size_t>(
      std::count_if(count.begin(), count.end(), [](std::size_t c) { return c > 1; }));
}

// ------------------------------------------------------------------ helpers

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  std::optional<Clock::time_point> at;
  void check() const {
    if (at && Clock::now() > *at) throw BudgetExceeded("time budget exhausted");
  }
};

/// Number of ground terms of size <= limit, saturating at `cap` + 1.
std::size_t count_ground_terms(const Signature& sig, std::size_t limit, std::size_t cap) {
  const double ceiling = static_cast<double>(cap) + 1;
  std::vector<double> exact(limit + 1, 0);
  for (std::size_t k = 1; k <= limit; ++k) {
    for (SymbolId f = 0; f < sig.size(); ++f) {
      const unsigned n = sig[f].arity;
      if (n == 0) {
        if (k == 1) exact[1] += 1;
        continue;
      }
      // Number of n-tuples whose sizes add up to k - 1.
      std::vector<double> ways(k, 0);
      ways[0] = 1;
      for (unsigned pos = 0; pos < n; ++pos) {
        std::vector<double> next(k, 0);
        for (std::size_t used = 0; used < k; ++used) {
          if (ways[used] == 0) continue;
          for (std::size_t s = 1; used + s < k; ++s)
            next[used + s] = std::min(ceiling, next[used + s] + ways[used] * exact[s]);
        }
        ways = std::move(next);
      }
      exact[k] = std::min(ceiling, exact[k] + ways[k - 1]);
    }
  }
  double total = 0;
  for (double e : exact) total = std::min(ceiling, total + e);
  return static_cast<std::size_t>(total);
}

EquationSet ground_equations_impl(const EquationSet& eqs, const Signature& sig,
                                  const Bound& bound, std::size_t cap, const Deadline& deadline) {
  const auto by_size = ground_terms_by_size(sig, bound.limit);
  const auto limit = static_cast<std::int64_t>(bound.limit);
  EquationSet out;
  std::size_t examined = 0;
  for (const auto& [lhs, rhs] : eqs) {
    const VarSet vs = vars(std::vector<Term>{lhs, rhs});
    std::vector<std::int64_t> occ_l, occ_r;
    std::int64_t size_l = static_cast<std::int64_t>(lhs.size());
    std::int64_t size_r = static_cast<std::int64_t>(rhs.size());
    for (VarId v : vs) {
      occ_l.push_back(static_cast<std::int64_t>(occ_count(v, lhs)));
      occ_r.push_back(static_cast<std::int64_t>(occ_count(v, rhs)));
    }
    // size_l / size_r hold the instance sizes with every unassigned
    // variable counted as size 1.
    if (size_l > limit || size_r > limit) continue;
    Substitution sigma;
    auto rec = [&](auto&& self, std::size_t k) -> void {
      if (k == vs.size()) {
        if (++examined > cap) throw BudgetExceeded("ground equation enumeration exceeds budget");
        if ((examined & 0xfff) == 0) deadline.check();
        out.emplace_back(sigma.apply(lhs), sigma.apply(rhs));
        return;
      }
      const std::int64_t base_l = size_l, base_r = size_r;
      for (std::int64_t s = 1; s <= limit; ++s) {
        size_l = base_l + occ_l[k] * (s - 1);
        size_r = base_r + occ_r[k] * (s - 1);
        if (size_l > limit || size_r > limit) break;
        for (const auto& g : by_size[static_cast<std::size_t>(s)]) {
          sigma.bind(vs[k], g);
          self(self, k + 1);
        }
      }
      size_l = base_l;
      size_r = base_r;
    };
    rec(rec, 0);
  }
  return out;
}

struct KeyHash {
  std::size_t operator()(const std::pair<SymbolId, std::vector<std::size_t>>& k) const {
    std::size_t h = std::hash<SymbolId>{}(k.first);
    for (auto c : k.second) h = h * 1000003u ^ std::hash<std::size_t>{}(c);
    return h;
  }
};

/// Universe terms as symbol plus child positions.
struct IndexedUniverse {
  std::vector<SymbolId> symbol;
  std::vector<std::vector<std::size_t>> children;
  std::unordered_map<Term, std::size_t, TermHash> position;

  explicit IndexedUniverse(const std::vector<Term>& universe) {
    symbol.resize(universe.size());
    children.resize(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (!universe[i].ground()) throw std::invalid_argument("universe terms must be ground");
      position.emplace(universe[i], i);
    }
    for (std::size_t i = 0; i < universe.size(); ++i) {
      symbol[i] = universe[i].symbol();
      for (const auto& a : universe[i].args()) children[i].push_back(at(a));
    }
  }

  std::size_t at(const Term& t) const {
    auto it = position.find(t);
    if (it == position.end()) throw std::invalid_argument("term outside the ground universe");
    return it->second;
  }
};

GroundPartition cc_saturate_impl(const std::vector<Term>& universe, const EquationSet& eqs,
                                 const Deadline& deadline) {
  const IndexedUniverse u(universe);
  const std::size_t n = universe.size();
  std::vector<std::size_t> parent(n), weight(n, 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<std::size_t>> uses(n);

  auto find = [&](std::size_t x) {
    std::size_t r = x;
    while (parent[r] != r) r = parent[r];
    while (parent[x] != r) x = std::exchange(parent[x], r);
    return r;
  };
  auto key_of = [&](std::size_t p) {
    std::pair<SymbolId, std::vector<std::size_t>> key{u.symbol[p], {}};
    for (auto c : u.children[p]) key.second.push_back(find(c));
    return key;
  };

  std::unordered_map<std::pair<SymbolId, std::vector<std::size_t>>, std::size_t, KeyHash> table;
  std::vector<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t p = 0; p < n; ++p) {
    auto& ch = u.children[p];
    for (std::size_t k = 0; k < ch.size(); ++k)
      if (std::find(ch.begin(), ch.begin() + static_cast<std::ptrdiff_t>(k), ch[k]) ==
          ch.begin() + static_cast<std::ptrdiff_t>(k))
        uses[ch[k]].push_back(p);
    auto [it, inserted] = table.emplace(key_of(p), p);
    if (!inserted) pending.emplace_back(p, it->second);
  }
  for (const auto& [s, t] : eqs) pending.emplace_back(u.at(s), u.at(t));

  std::size_t work = 0;
  while (!pending.empty()) {
    auto [x, y] = pending.back();
    pending.pop_back();
    std::size_t a = find(x), b = find(y);
    if (a == b) continue;
    if (weight[a] < weight[b]) std::swap(a, b);
    parent[b] = a;
    weight[a] += weight[b];
    // Parents of b get new keys; stale entries keep a non-root and never match.
    for (auto p : uses[b]) {
      if ((++work & 0xfff) == 0) deadline.check();
      auto [it, inserted] = table.emplace(key_of(p), p);
      if (!inserted && find(it->second) != find(p)) pending.emplace_back(p, it->second);
    }
    uses[a].insert(uses[a].end(), uses[b].begin(), uses[b].end());
    uses[b].clear();
  }

  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = find(i);
  return GroundPartition(universe, labels);
}

}  // namespace

EquationSet ground_equations(const EquationSet& eqs, const Signature& sig, const Bound& bound,
                             std::size_t cap) {
  return ground_equations_impl(eqs, sig, bound, cap, Deadline{});
}

GroundPartition cc_saturate(const std::vector<Term>& universe, const EquationSet& eqs) {
  return cc_saturate_impl(universe, eqs, Deadline{});
}

GroundPartition eq_closure(const std::vector<Term>& universe, const EquationSet& eqs,
                           std::size_t max_universe) {
  if (universe.size() > max_universe)
    throw BudgetExceeded("universe too large for the naive closure");
  const IndexedUniverse u(universe);
  const std::size_t n = universe.size();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  auto relabel = [&](std::size_t from, std::size_t to) {
    for (auto& l : label)
      if (l == from) l = to;
  };
  auto identify = [&](std::size_t i, std::size_t j) {
    if (label[i] == label[j]) return false;
    relabel(std::max(label[i], label[j]), std::min(label[i], label[j]));
    return true;
  };

  std::map<SymbolId, std::vector<std::size_t>> apps;
  for (std::size_t i = 0; i < n; ++i)
    if (!u.children[i].empty()) apps[u.symbol[i]].push_back(i);

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [s, t] : eqs) changed |= identify(u.at(s), u.at(t));
    for (const auto& [f, members] : apps) {
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          const auto p = members[a], q = members[b];
          if (label[p] == label[q]) continue;
          bool congruent = true;
          for (std::size_t k = 0; k < u.children[p].size() && congruent; ++k)
            congruent = label[u.children[p][k]] == label[u.children[q][k]];
          if (congruent) changed |= identify(p, q);
        }
      }
    }
  }
  return GroundPartition(universe, label);
}

GroundCcResult run_ground_cc(const Signature& sig, const EquationSet& eqs, const Bound& bound,
                             const GroundCcOptions& options) {
  const auto start = Clock::now();
  Deadline deadline;
  if (options.time_limit) deadline.at = start + *options.time_limit;
  GroundCcResult result;
  try {
    if (count_ground_terms(sig, bound.limit, options.cap) > options.cap)
      throw BudgetExceeded("ground universe exceeds budget");
    std::vector<Term> universe = enumerate_ground_terms(sig, bound);
    deadline.check();
    EquationSet ground = ground_equations_impl(eqs, sig, bound, options.cap, deadline);
    deadline.check();
    result.partition = cc_saturate_impl(universe, ground, deadline);
    result.completed = true;
  } catch (const BudgetExceeded&) {
    result.completed = false;
  }
  result.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

std::string dump(const GroundPartition& p, const Signature& sig, double time_ms) {
  std::string out = "blocks_total=" + std::to_string(p.blocks_total()) + "\n";
  out += "blocks_nonsingleton=" + std::to_string(p.blocks_nonsingleton()) + "\n";
  out += "time_ms=" + std::to_string(static_cast<long long>(time_ms)) + "\n";
  for (const auto& block : p.blocks()) {
    out += "{";
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) out += ", ";
      out += to_string(block[i], sig);
    }
    out += "}\n";
  }
  return out;
}

}  // namespace ccx
