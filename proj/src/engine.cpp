#include "ccx/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ccx/subsumption.hpp"

namespace ccx {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------- TermIndex

namespace {

constexpr std::uint64_t kWildcard = 0;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

/// The shape of an index term: its top symbol and, per argument, the
/// argument's top symbol or a wildcard for a variable.
std::uint64_t shape_key(const Term& s) {
  std::uint64_t h = mix(0, s.symbol() + 1);
  for (const auto& a : s.args()) h = mix(h, a.is_var() ? kWildcard : a.symbol() + 1);
  return h;
}

/// Every shape a generalization of `t` can have. Past a few concrete
/// arguments the enumeration is skipped (empty result: no filtering).
std::vector<std::uint64_t> generalizing_shapes(const Term& t) {
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (!t.args()[i].is_var()) open.push_back(i);
  if (open.size() > 6) return {};
  std::vector<std::uint64_t> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << open.size()); ++mask) {
    std::uint64_t h = mix(0, t.symbol() + 1);
    std::size_t k = 0;
    for (std::size_t i = 0; i < t.arity(); ++i) {
      const Term& a = t.args()[i];
      if (a.is_var()) {
        h = mix(h, kWildcard);
        continue;
      }
      h = mix(h, (mask >> k++) & 1 ? kWildcard : a.symbol() + 1);
    }
    out.push_back(h);
  }
  return out;
}

}  // namespace

TermIndex::Shapes TermIndex::shapes_of(const CongruenceClass& c) {
  Shapes sh;
  sh.query = query_of(c.terms());
  for (const auto& t : c.terms()) {
    if (t.is_var())
      sh.variable_term = true;
    else
      sh.keys.push_back(shape_key(t));
  }
  std::sort(sh.keys.begin(), sh.keys.end());
  return sh;
}

TermIndex::Query TermIndex::query_of(std::span<const Term> terms) {
  Query q;
  q.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.is_var())
      q.emplace_back(std::nullopt);
    else
      q.emplace_back(generalizing_shapes(t));
  }
  return q;
}

bool TermIndex::may_cover(const Shapes& general, const Query& query) {
  if (general.variable_term) return true;
  for (const auto& keys : query) {
    if (!keys) return false;
    if (keys->empty()) continue;
    const bool hit = std::any_of(keys->begin(), keys->end(), [&](std::uint64_t k) {
      return std::binary_search(general.keys.begin(), general.keys.end(), k);
    });
    if (!hit) return false;
  }
  return true;
}

void TermIndex::insert(ClassId id, const CongruenceClass& c) {
  all_.insert(id);
  if (c.has_variable_term()) with_variable_term_.insert(id);
  for (const auto& t : c.terms())
    if (!t.is_var()) by_top_[t.symbol()].insert(id);
  shapes_[id] = shapes_of(c);
}

void TermIndex::erase(ClassId id, const CongruenceClass& c) {
  all_.erase(id);
  with_variable_term_.erase(id);
  shapes_.erase(id);
  for (const auto& t : c.terms()) {
    if (t.is_var()) continue;
    auto it = by_top_.find(t.symbol());
    if (it != by_top_.end()) it->second.erase(id);
  }
}

std::vector<ClassId> TermIndex::generalization_candidates(const CongruenceClass& c) const {
  std::vector<ClassId> out;
  if (c.has_variable_term()) {
    out.assign(with_variable_term_.begin(), with_variable_term_.end());
    return out;
  }
  // A subsumer needs every top symbol of c; the rarest one narrows the most.
  const std::set<ClassId>* narrowest = nullptr;
  static const std::set<ClassId> kEmpty;
  for (const auto& t : c.terms()) {
    auto it = by_top_.find(t.symbol());
    const auto* bucket = it == by_top_.end() ? &kEmpty : &it->second;
    if (!narrowest || bucket->size() < narrowest->size()) narrowest = bucket;
  }
  std::vector<ClassId> merged;
  std::set_union(narrowest->begin(), narrowest->end(), with_variable_term_.begin(),
                 with_variable_term_.end(), std::back_inserter(merged));
  const Query query = query_of(c.terms());
  for (ClassId id : merged)
    if (may_cover(shapes_.at(id), query)) out.push_back(id);
  return out;
}

std::vector<ClassId> TermIndex::instance_candidates(const CongruenceClass& c) const {
  std::set<ClassId> pool;
  if (c.has_variable_term()) {
    pool = all_;
  } else {
    for (const auto& t : c.terms()) {
      auto it = by_top_.find(t.symbol());
      if (it != by_top_.end()) pool.insert(it->second.begin(), it->second.end());
    }
  }
  const Shapes mine = shapes_of(c);
  std::vector<ClassId> out;
  for (ClassId id : pool)
    if (may_cover(mine, shapes_.at(id).query)) out.push_back(id);
  return out;
}

// -------------------------------------------------------------------- State

State::State(Signature sig, Bound bound, EngineOptions options)
    : sig_(std::move(sig)), bound_(std::move(bound)), options_(options) {
  if (options_.time_limit) {
    deadline_ = Clock::now() + *options_.time_limit;
    has_deadline_ = true;
  }
}

void State::check_deadline() const {
  if (has_deadline_ && Clock::now() > deadline_) throw Timeout{};
}

bool State::live(ClassId id) const { return slots_[id].status != ClassStatus::Retired; }

std::vector<ClassId> State::worked_off() const {
  std::vector<ClassId> out;
  for (ClassId id = 0; id < slots_.size(); ++id)
    if (slots_[id].status == ClassStatus::WorkedOff) out.push_back(id);
  return out;
}

std::vector<ClassId> State::usable() const {
  std::vector<ClassId> out;
  for (const auto& key : queue_) out.push_back(std::get<3>(key));
  return out;
}

State::QueueKey State::key_of(ClassId id) const {
  const auto& c = slots_[id].cls;
  return {c.size(), -static_cast<std::int64_t>(c.term_vars().size()), c.separating().size(), id};
}

ClassId State::store(CongruenceClass c, ClassStatus status, bool initial_single) {
  const auto id = static_cast<ClassId>(slots_.size());
  if (c.max_var() >= 0) fresh_.reserve_above(static_cast<VarId>(c.max_var()));
  slots_.push_back(Slot{std::move(c), status, initial_single});
  index_.insert(id, slots_[id].cls);
  if (status == ClassStatus::Usable) queue_.insert(key_of(id));
  ++stats_.classes_created;
  return id;
}

void State::retire(ClassId id) {
  auto& slot = slots_[id];
  if (slot.status == ClassStatus::Usable) queue_.erase(key_of(id));
  slot.status = ClassStatus::Retired;
  index_.erase(id, slot.cls);
  ++stats_.retired;
}

void State::add_single_term_class(SymbolId f) {
  const unsigned n = sig_[f].arity;
  if (n + 1 > bound_.limit) return;
  std::vector<Term> args;
  for (unsigned i = 0; i < n; ++i) args.push_back(Term::variable(fresh_.fresh()));
  store(make_class({Term::apply(f, std::move(args))}), ClassStatus::WorkedOff, true);
}

std::optional<ClassId> State::add_equation(const Equation& e) {
  // Equations may share variable ids with each other; rename before use.
  Renamed r = rename_apart(std::vector<Term>{e.first, e.second}, {}, fresh_);
  return admit(std::move(r.terms), {}, std::nullopt).id;
}

std::optional<ClassId> State::select_next() {
  if (queue_.empty()) return std::nullopt;
  const ClassId id = std::get<3>(*queue_.begin());
  queue_.erase(queue_.begin());
  slots_[id].status = ClassStatus::Current;
  ++stats_.steps;
  return id;
}

std::optional<ClassId> State::find_subsumer(const CongruenceClass& c,
                                            std::optional<ClassId> extra) const {
  // The class being worked on is the most likely subsumer of its children.
  if (extra && live(*extra) && subsumes_by_matching(slots_[*extra].cls, c, bound_)) return extra;
  for (ClassId id : index_.generalization_candidates(c)) {
    if (!live(id) || (extra && id == *extra)) continue;
    if (subsumes_by_matching(slots_[id].cls, c, bound_)) return id;
  }
  return std::nullopt;
}

State::Admission State::admit(std::vector<Term> terms, const Constraint& constraint,
                              std::optional<ClassId> current) {
  Admission result;
  if (!satisfiable(constraint, bound_)) return result;
  for (const auto& t : terms)
    if (t.size() > bound_.limit) return result;
  // Once satisfiable, inherited atoms that share no variable with the terms
  // hold outright (ground ones, and those over variables set to size 1).
  const VarSet term_vars = vars(terms);
  std::vector<Term> open_atoms;
  for (const auto& a : constraint.atoms())
    if (!varset::disjoint(vars(a), term_vars)) open_atoms.push_back(a);
  CongruenceClass c = make_class(std::move(terms), Constraint(std::move(open_atoms)));

  // The index holds every live class, including the current one.
  if (find_subsumer(c, current)) {
    ++stats_.forward_subsumed;
    return result;
  }
  for (ClassId id : index_.instance_candidates(c)) {
    if (!live(id)) continue;
    if (!subsumes_by_matching(c, slots_[id].cls, bound_)) continue;
    if (current && id == *current) result.current_retired = true;
    retire(id);
  }

  c = condense(c, bound_);
  c = collapse_constraint_vars(c, fresh_);
  c = c.renamed(fresh_);
  result.id = store(std::move(c), ClassStatus::Usable, false);
  return result;
}

// ---------------------------------------------------------------- Merge

StepOutcome State::merge_step(ClassId c) {
  StepOutcome out;
  // Working on a renamed copy keeps every new class variable-disjoint from
  // the stored ones.
  const CongruenceClass selected = slots_[c].cls.renamed(fresh_);
  const CongruenceClass norm_c = normalize(selected, fresh_);

  std::vector<ClassId> partners = worked_off();
  // The selected class merges with a renamed copy of itself last.
  partners.push_back(c);
  for (ClassId p : partners) {
    if (!live(p)) continue;
    const bool self = p == c;
    const CongruenceClass partner = self ? selected.renamed(fresh_) : slots_[p].cls.renamed(fresh_);
    const CongruenceClass norm_p = normalize(partner, fresh_);
    const Constraint joint = norm_c.constraint().conjoin(norm_p.constraint());

    // Different term pairs often share a unifier; each one is merged once.
    std::vector<Substitution> seen;
    for (const auto& s : selected.terms()) {
      for (const auto& t : partner.terms()) {
        if (!live(p) && !self) break;
        check_deadline();
        auto mu = mgu(s, t);
        if (!mu) continue;
        if (std::find(seen.begin(), seen.end(), *mu) != seen.end()) continue;
        seen.push_back(*mu);
        std::vector<Term> terms;
        for (const auto& u : norm_c.terms()) terms.push_back(mu->apply(u));
        for (const auto& u : norm_p.terms()) terms.push_back(mu->apply(u));
        const Admission a = admit(std::move(terms), joint.apply(*mu), c);
        if (a.id) {
          ++stats_.merges;
          out.created.push_back(*a.id);
        }
        if (a.current_retired) {
          out.selected_survives = false;
          return out;
        }
      }
    }
  }
  return out;
}

// ------------------------------------------------------------ Deduction

namespace {

struct Copy {
  std::vector<Term> terms;
  Constraint constraint;
  std::size_t min_size = 0;  // smallest term size, for pruning
};

}  // namespace

StepOutcome State::deduction_step(ClassId c) {
  StepOutcome out;
  slots_[c].status = ClassStatus::WorkedOff;

  unsigned max_arity = 0;
  for (SymbolId f = 0; f < sig_.size(); ++f) max_arity = std::max(max_arity, sig_[f].arity);
  if (max_arity == 0) return out;

  // One normalized, renamed copy of every worked-off class per argument
  // position, so positions never share variables.
  const std::vector<ClassId> partners = worked_off();
  std::vector<std::vector<Copy>> copies(max_arity);
  for (unsigned i = 0; i < max_arity; ++i) {
    for (ClassId p : partners) {
      const CongruenceClass n = normalize(slots_[p].cls, fresh_).renamed(fresh_);
      Copy copy{{n.terms().begin(), n.terms().end()}, n.constraint(), 0};
      copy.min_size = copy.terms.front().size();
      for (const auto& t : copy.terms) copy.min_size = std::min(copy.min_size, t.size());
      copies[i].push_back(std::move(copy));
    }
  }

  const std::size_t limit = bound_.limit;
  for (SymbolId f = 0; f < sig_.size(); ++f) {
    const unsigned n = sig_[f].arity;
    if (n == 0 || n + 1 > limit) continue;

    std::vector<Term> lhs(n), rhs(n);
    std::vector<const Constraint*> parts(n);
    // Returns false once the selected class has been retired.
    auto rec = [&](auto&& self, unsigned i, std::size_t size_l, std::size_t size_r,
                   bool used, bool tied) -> bool {
      if (i == n) {
        // Equal sides identify nothing.
        if (!used || tied) return true;
        check_deadline();
        Constraint constraint;
        for (const auto* part : parts) constraint = constraint.conjoin(*part);
        const Admission a =
            admit({Term::apply(f, lhs), Term::apply(f, rhs)}, constraint, c);
        if (a.id) {
          ++stats_.deductions;
          out.created.push_back(*a.id);
        }
        return !a.current_retired;
      }
      const std::size_t rest = n - i - 1;  // minimum size of the later arguments
      for (std::size_t k = 0; k < partners.size(); ++k) {
        const ClassId p = partners[k];
        if (!live(p)) continue;
        const Copy& copy = copies[i][k];
        if (size_l + copy.min_size + rest > limit || size_r + copy.min_size + rest > limit)
          continue;
        parts[i] = &copy.constraint;
        for (std::size_t a = 0; a < copy.terms.size(); ++a) {
          const std::size_t nl = size_l + copy.terms[a].size();
          if (nl + rest > limit) continue;
          // (lhs, rhs) and (rhs, lhs) give the same class: keep one order.
          for (std::size_t b = tied ? a : 0; b < copy.terms.size(); ++b) {
            const std::size_t nr = size_r + copy.terms[b].size();
            if (nr + rest > limit) continue;
            lhs[i] = copy.terms[a];
            rhs[i] = copy.terms[b];
            if (!self(self, i + 1, nl, nr, used || p == c, tied && a == b)) return false;
            if (!live(p)) break;
          }
          if (!live(p)) break;
        }
      }
      return true;
    };
    if (!rec(rec, 0, 1, 1, false, true)) {
      out.selected_survives = false;
      return out;
    }
  }
  return out;
}

// -------------------------------------------------------------- saturation

State init_state(const Signature& sig, const EquationSet& eqs, const Bound& bound,
                 EngineOptions options) {
  State state(sig, bound, options);
  for (SymbolId f = 0; f < sig.size(); ++f) state.add_single_term_class(f);
  for (const auto& e : eqs) state.add_equation(e);
  return state;
}

std::size_t SaturationResult::derived_class_count() const {
  return static_cast<std::size_t>(std::count(initial_single.begin(), initial_single.end(), false));
}

SaturationResult saturate(State& state) {
  const auto start = Clock::now();
  SaturationResult result{state.signature(), state.bound(), {}, {}, {}, false};
  const auto max_steps = state.options().max_steps;
  bool completed = true;
  try {
    while (!state.usable_empty()) {
      if (max_steps && state.stats().steps >= *max_steps) break;
      state.check_deadline();
      const ClassId c = *state.select_next();
      if (!state.merge_step(c).selected_survives) continue;
      state.deduction_step(c);
    }
  } catch (const State::Timeout&) {
    completed = false;
  }
  for (ClassId id = 0; id < state.slot_count(); ++id) {
    const auto st = state.status(id);
    if (st == ClassStatus::Retired) continue;
    result.classes.push_back(state.cls(id));
    result.initial_single.push_back(state.is_initial_single_term(id));
  }
  result.completed = completed && state.usable_empty();
  result.stats = state.stats();
  result.stats.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

SaturationResult saturate(const Signature& sig, const EquationSet& eqs, const Bound& bound,
                          EngineOptions options) {
  const auto start = Clock::now();
  try {
    State state = init_state(sig, eqs, bound, options);
    SaturationResult r = saturate(state);
    r.stats.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
  } catch (const State::Timeout&) {
    SaturationResult r{sig, bound, {}, {}, {}, false};
    r.stats.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
  }
}

// ----------------------------------------------------------------- queries

namespace {

void require_ground_in_m(const Term& t, const Bound& bound) {
  if (!t.ground()) throw std::invalid_argument("query terms must be ground");
  if (!bound.admits(t)) throw std::invalid_argument("query term exceeds the bound");
}

}  // namespace

bool query_equal(const SaturationResult& result, const Term& s, const Term& t) {
  require_ground_in_m(s, result.bound);
  require_ground_in_m(t, result.bound);
  for (const auto& a : result.classes) {
    FreshVars fresh;
    if (a.max_var() >= 0) fresh.reserve_above(static_cast<VarId>(a.max_var()));
    const CongruenceClass n = normalize(a, fresh);
    for (const auto& u : n.terms()) {
      Substitution first;
      if (!match_into(u, s, first)) continue;
      for (const auto& v : n.terms()) {
        Substitution both = first;
        if (!match_into(v, t, both)) continue;
        if (satisfiable(n.constraint().apply(both), result.bound)) return true;
      }
    }
  }
  return false;
}

GroundPartition ground_partition(const SaturationResult& result) {
  std::vector<Term> universe = enumerate_ground_terms(result.sig, result.bound);
  std::vector<std::size_t> parent(universe.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  // Ground instances of one class fall into the same block exactly when
  // they agree on the separating variables. A term may match several class
  // terms with different separating bindings, so every match counts.
  for (const auto& a : result.classes) {
    std::map<std::vector<Term>, std::size_t, TermVectorLess> block_of;
    const VarSet& sep = a.separating();
    for (std::size_t i = 0; i < universe.size(); ++i) {
      for (const auto& s : a.terms()) {
        Substitution m;
        if (!match_into(s, universe[i], m)) continue;
        if (!satisfiable(a.constraint().apply(m), result.bound)) continue;
        std::vector<Term> key;
        for (VarId x : sep) key.push_back(*m.find(x));
        auto [it, inserted] = block_of.emplace(std::move(key), i);
        if (!inserted) parent[find(i)] = find(it->second);
      }
    }
  }
  std::vector<std::size_t> labels(universe.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = find(i);
  return GroundPartition(std::move(universe), labels);
}

std::string dump(const SaturationResult& result) {
  std::ostringstream os;
  os << "classes_created=" << result.stats.classes_created << "\n"
     << "classes_final=" << result.classes.size() << "\n"
     << "merges=" << result.stats.merges << "\n"
     << "deductions=" << result.stats.deductions << "\n"
     << "subsumptions=" << result.stats.subsumptions() << "\n"
     << "time_ms=" << static_cast<long long>(result.stats.time_ms) << "\n";
  std::vector<std::string> lines;
  for (const auto& a : result.classes) lines.push_back(to_string(a, result.sig));
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) os << l << "\n";
  return os.str();
}

}  // namespace ccx
