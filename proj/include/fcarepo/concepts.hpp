#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fcarepo/context.hpp"

namespace fcarepo {

/// A pair of mutually closed sets: extent' = intent and intent' = extent.
struct FormalConcept {
    Bitset extent; // object indices
    Bitset intent; // attribute indices
    bool operator==(const FormalConcept&) const = default;
};

/// premise -> conclusion over attribute indices.  The stored conclusion is the
/// full closure of the premise; display forms may subtract the premise.
struct Implication {
    Bitset premise;
    Bitset conclusion;
    bool operator==(const Implication&) const = default;
};

/// Lectic order on attribute sets: a < b iff the lowest differing attribute
/// index belongs to b.  The attribute order is the context's declared order.
bool lectic_less(const Bitset& a, const Bitset& b);

/// Steps the lectic enumeration of closed attribute sets: none -> closure of
/// the empty set; the full attribute set -> none.  Throws ContextError when
/// `current` is not closed or has the wrong width.
std::optional<Bitset> next_closure(const FormalContext& ctx,
                                   const std::optional<Bitset>& current);

inline constexpr std::size_t kDefaultConceptBudget = 1'000'000;

/// All concepts, intents in ascending lectic order (extents recomputed from
/// intents).  Throws BudgetExceededError when the count would pass `budget`.
std::vector<FormalConcept> enumerate_concepts(const FormalContext& ctx,
                                              std::size_t budget = kDefaultConceptBudget);

/// Oracle: check every attribute subset for closedness.  Requires
/// |attributes| <= 20 (throws ContextError above that).  Result is in
/// ascending lectic order, so equality with enumerate_concepts is direct.
std::vector<FormalConcept> enumerate_concepts_bruteforce(const FormalContext& ctx);

/// The Duquenne-Guigues (stem) basis via pseudo-intent enumeration in lectic
/// order.  Complete and sound; subject to the same budget guard (counting
/// visited sets).
std::vector<Implication> canonical_basis(const FormalContext& ctx,
                                         std::size_t budget = kDefaultConceptBudget);

/// True iff the implication holds in ctx: conclusion is contained in the
/// closure of the premise.  Throws ContextError on width mismatch.
bool implication_holds(const FormalContext& ctx, const Implication& imp);

/// Least superset of attrs closed under all given implications (forward
/// chaining to a fixpoint).  Throws ContextError on width mismatch.
Bitset close_under_implications(std::span<const Implication> implications, const Bitset& attrs);

} // namespace fcarepo
