#pragma once

#include <optional>

#include "ccx/classes.hpp"
#include "ccx/constraint.hpp"

namespace ccx {

/// Cheap necessary condition for `general` to subsume `instance`: every top
/// symbol of the instance must also be a top symbol of the general class.
/// A general class with a bare variable term always passes.
bool prefilter(const CongruenceClass& general, const CongruenceClass& instance);

/// Subsumption by matching. There must be one substitution sigma on the
/// separating variables of `general` such that every term t of `instance`
/// equals s*sigma*tau for some general term s and some tau on the general's
/// free variables, and the instance constraint implies the instantiated
/// general constraint. Variable-disjointness is established internally.
bool subsumes_by_matching(const CongruenceClass& general, const CongruenceClass& instance,
                          const Bound& bound);

/// The separating-variable substitution found by subsumes_by_matching, for
/// inspection; nullopt when subsumption fails. The general class is renamed
/// apart first when it shares variables with the instance, so the returned
/// domain then refers to the renamed copy.
std::optional<Substitution> subsumption_witness(const CongruenceClass& general,
                                                const CongruenceClass& instance,
                                                const Bound& bound);

}  // namespace ccx
