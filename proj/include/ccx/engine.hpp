#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ccx/classes.hpp"
#include "ccx/constraint.hpp"
#include "ccx/ground_cc.hpp"
#include "ccx/term.hpp"

namespace ccx {

using ClassId = std::uint32_t;

enum class ClassStatus { WorkedOff, Usable, Current, Retired };

struct EngineStats {
  std::size_t classes_created = 0;
  std::size_t merges = 0;          // classes admitted from Merge
  std::size_t deductions = 0;      // classes admitted from Deduction
  std::size_t forward_subsumed = 0;
  std::size_t retired = 0;         // existing classes removed by a newer one
  std::size_t steps = 0;           // classes selected from usable
  double time_ms = 0;

  std::size_t subsumptions() const { return forward_subsumed + retired; }
};

struct EngineOptions {
  /// Wall-clock budget; nullopt means unlimited.
  std::optional<std::chrono::milliseconds> time_limit;
  /// Maximum number of selected classes; nullopt means unlimited.
  std::optional<std::size_t> max_steps;
};

/// Candidate retrieval over live classes by top symbol. A class can only
/// subsume another when its top symbols cover the other's (or it has a
/// variable term), which is what the buckets exploit. Candidates are then
/// narrowed by term shapes: a term and its generalization agree on the top
/// symbol and on every argument top symbol where the generalization has no
/// variable.
class TermIndex {
 public:
  void insert(ClassId id, const CongruenceClass& c);
  void erase(ClassId id, const CongruenceClass& c);

  /// Classes that may generalize `c` (possible subsumers).
  std::vector<ClassId> generalization_candidates(const CongruenceClass& c) const;
  /// Classes that may be instances of `c` (possibly subsumed by it).
  std::vector<ClassId> instance_candidates(const CongruenceClass& c) const;

 private:
  /// Per query term, the shape keys any generalization of it can have;
  /// nullopt marks a variable term.
  using Query = std::vector<std::optional<std::vector<std::uint64_t>>>;
  struct Shapes {
    std::vector<std::uint64_t> keys;  // sorted shape keys of the terms
    Query query;                      // the terms as a query
    bool variable_term = false;
  };
  static Shapes shapes_of(const CongruenceClass& c);
  static Query query_of(std::span<const Term> terms);
  /// Necessary condition for some term of `general` to generalize each
  /// query term.
  static bool may_cover(const Shapes& general, const Query& query);

  std::map<SymbolId, std::set<ClassId>> by_top_;
  std::set<ClassId> with_variable_term_;
  std::set<ClassId> all_;
  std::map<ClassId, Shapes> shapes_;
};

struct StepOutcome {
  std::vector<ClassId> created;
  /// False when the selected class was subsumed by one of its children.
  bool selected_survives = true;
};

/// Saturation state: worked-off classes, the usable queue and bookkeeping.
/// Every stored class is variable-disjoint from every other one.
class State {
 public:
  State(Signature sig, Bound bound, EngineOptions options = {});

  const Signature& signature() const { return sig_; }
  const Bound& bound() const { return bound_; }
  const EngineStats& stats() const { return stats_; }
  const EngineOptions& options() const { return options_; }

  const CongruenceClass& cls(ClassId id) const { return slots_.at(id).cls; }
  ClassStatus status(ClassId id) const { return slots_.at(id).status; }
  bool is_initial_single_term(ClassId id) const { return slots_.at(id).initial_single; }
  std::size_t slot_count() const { return slots_.size(); }

  std::vector<ClassId> worked_off() const;
  std::vector<ClassId> usable() const;
  bool usable_empty() const { return queue_.empty(); }

  /// Adds the single-term class of `f` to worked-off if its term fits M.
  void add_single_term_class(SymbolId f);
  /// Runs an equation class through the admission pipeline into usable.
  std::optional<ClassId> add_equation(const Equation& e);

  /// Pops the class with fewest terms, then most variables, then fewest
  /// separating variables, then lowest id. Its status becomes Current.
  std::optional<ClassId> select_next();

  StepOutcome merge_step(ClassId c);
  /// Temporarily places `c` in worked-off. On return `c` stays there when it
  /// survived and is retired otherwise.
  StepOutcome deduction_step(ClassId c);

  /// Returns the first live class subsuming `c` by matching, if any.
  std::optional<ClassId> find_subsumer(const CongruenceClass& c,
                                       std::optional<ClassId> extra = std::nullopt) const;

  /// Raised from inside a step once the time budget is spent.
  struct Timeout {};
  void check_deadline() const;

 private:
  struct Slot {
    CongruenceClass cls;
    ClassStatus status;
    bool initial_single = false;
  };
  using QueueKey = std::tuple<std::size_t, std::int64_t, std::size_t, ClassId>;

  QueueKey key_of(ClassId id) const;
  ClassId store(CongruenceClass c, ClassStatus status, bool initial_single);
  void retire(ClassId id);
  bool live(ClassId id) const;

  struct Admission {
    std::optional<ClassId> id;
    bool current_retired = false;
  };
  /// Satisfiability, forward subsumption, backward sweep, condensation,
  /// constraint-variable collapse and renaming, then push to usable.
  Admission admit(std::vector<Term> terms, const Constraint& constraint,
                  std::optional<ClassId> current);

  Signature sig_;
  Bound bound_;
  EngineOptions options_;
  std::chrono::steady_clock::time_point deadline_;
  bool has_deadline_ = false;
  FreshVars fresh_;
  std::vector<Slot> slots_;
  std::set<QueueKey> queue_;
  TermIndex index_;
  EngineStats stats_;
};

/// Initial state: one usable class {s,t || s,t} per equation with a ground
/// instance in M, one worked-off single-term class per fitting symbol.
State init_state(const Signature& sig, const EquationSet& eqs, const Bound& bound,
                 EngineOptions options = {});

struct SaturationResult {
  Signature sig;
  Bound bound;
  std::vector<CongruenceClass> classes;  // final classes, by creation order
  std::vector<bool> initial_single;      // parallel to `classes`
  EngineStats stats;
  bool completed = false;

  /// Final classes other than untouched initial single-term classes.
  std::size_t derived_class_count() const;
};

/// Runs the given-class loop until usable is empty or the budget runs out.
SaturationResult saturate(State& state);
SaturationResult saturate(const Signature& sig, const EquationSet& eqs, const Bound& bound,
                          EngineOptions options = {});

/// True iff some final class A has terms s', t' in norm(A) with a common
/// matcher onto (s, t) under which the constraint stays satisfiable.
/// Throws std::invalid_argument when s or t is not a ground term of M.
bool query_equal(const SaturationResult& result, const Term& s, const Term& t);

/// Ground partition of T_{<=limit} induced by the final classes.
GroundPartition ground_partition(const SaturationResult& result);

/// Statistics lines followed by one class per line.
std::string dump(const SaturationResult& result);

}  // namespace ccx
