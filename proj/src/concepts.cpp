#include "fcarepo/concepts.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "fcarepo/errors.hpp"

namespace fcarepo {

bool lectic_less(const Bitset& a, const Bitset& b) {
    const Bitset diff = a ^ b;
    const std::size_t first = diff.find_first();
    if (first == Bitset::npos) return false;
    return b.test(first);
}

namespace {

void check_width(const Bitset& set, std::size_t width, const char* what) {
    if (set.size() != width) {
        throw ContextError(std::string(what) + " has width " + std::to_string(set.size()) +
                           ", expected " + std::to_string(width));
    }
}

// Lectic successor of `current` among the closed sets of `close`.  `current`
// need not itself be closed (the basis algorithm advances from pseudo-closed
// sets); the result, if any, is the lectically smallest closed set above it.
template <typename Close>
std::optional<Bitset> next_closed_set(const Bitset& current, std::size_t width, Close&& close) {
    Bitset work = current;
    Bitset low_mask(width);
    low_mask.set();
    for (std::size_t i = width; i-- > 0;) {
        low_mask.reset(i); // low_mask = [0, i)
        if (work.test(i)) {
            work.reset(i);
            continue;
        }
        Bitset candidate = work;
        candidate.set(i);
        Bitset closed = close(candidate);
        // Accept unless closing added an attribute below i.
        if (((closed ^ work) & low_mask).none()) {
            return closed;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<Bitset> next_closure(const FormalContext& ctx,
                                   const std::optional<Bitset>& current) {
    const std::size_t m = ctx.attribute_count();
    auto close = [&](const Bitset& s) { return attribute_closure(ctx, s); };
    if (!current) {
        return close(Bitset(m));
    }
    check_width(*current, m, "attribute set");
    if (close(*current) != *current) {
        throw ContextError("attribute set is not closed");
    }
    return next_closed_set(*current, m, close);
}

std::vector<FormalConcept> enumerate_concepts(const FormalContext& ctx, std::size_t budget) {
    const std::size_t m = ctx.attribute_count();
    auto close = [&](const Bitset& s) { return attribute_closure(ctx, s); };

    std::vector<FormalConcept> out;
    std::optional<Bitset> intent = close(Bitset(m));
    while (intent) {
        if (out.size() >= budget) {
            throw BudgetExceededError("concept enumeration exceeded the budget of " +
                                          std::to_string(budget),
                                      budget);
        }
        out.push_back({attribute_derivation(ctx, *intent), *intent});
        intent = next_closed_set(*intent, m, close);
    }
    return out;
}

std::vector<FormalConcept> enumerate_concepts_bruteforce(const FormalContext& ctx) {
    const std::size_t m = ctx.attribute_count();
    if (m > 20) {
        throw ContextError("brute-force enumeration supports at most 20 attributes, got " +
                           std::to_string(m));
    }
    std::vector<FormalConcept> out;
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        Bitset subset(m);
        for (std::size_t j = 0; j < m; ++j) {
            if (mask & (std::uint64_t{1} << j)) subset.set(j);
        }
        if (attribute_closure(ctx, subset) == subset) {
            out.push_back({attribute_derivation(ctx, subset), subset});
        }
    }
    std::sort(out.begin(), out.end(), [](const FormalConcept& a, const FormalConcept& b) {
        return lectic_less(a.intent, b.intent);
    });
    return out;
}

std::vector<Implication> canonical_basis(const FormalContext& ctx, std::size_t budget) {
    const std::size_t m = ctx.attribute_count();
    std::vector<Implication> basis;
    auto implication_close = [&](const Bitset& s) {
        return close_under_implications(basis, s);
    };

    Bitset full(m);
    full.set();
    std::optional<Bitset> current = Bitset(m); // the empty set starts the lectic order
    std::size_t visited = 0;
    while (current) {
        if (++visited > budget) {
            throw BudgetExceededError("basis computation exceeded the budget of " +
                                          std::to_string(budget),
                                      budget);
        }
        const Bitset closed = attribute_closure(ctx, *current);
        if (closed != *current) {
            basis.push_back({*current, closed});
        }
        if (*current == full) break;
        current = next_closed_set(*current, m, implication_close);
    }
    return basis;
}

bool implication_holds(const FormalContext& ctx, const Implication& imp) {
    const std::size_t m = ctx.attribute_count();
    check_width(imp.premise, m, "implication premise");
    check_width(imp.conclusion, m, "implication conclusion");
    return imp.conclusion.is_subset_of(attribute_closure(ctx, imp.premise));
}

Bitset close_under_implications(std::span<const Implication> implications, const Bitset& attrs) {
    Bitset result = attrs;
    for (const Implication& imp : implications) {
        check_width(imp.premise, attrs.size(), "implication premise");
        check_width(imp.conclusion, attrs.size(), "implication conclusion");
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Implication& imp : implications) {
            if (imp.premise.is_subset_of(result) && !imp.conclusion.is_subset_of(result)) {
                result |= imp.conclusion;
                changed = true;
            }
        }
    }
    return result;
}

} // namespace fcarepo
