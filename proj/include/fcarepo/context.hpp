#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "fcarepo/errors.hpp"

namespace fcarepo {

/// Index set over objects or attributes. Bit i set means index i is a member.
using Bitset = boost::dynamic_bitset<>;

/// Ascending indices of the set bits.
std::vector<std::size_t> set_indices(const Bitset& bits);

/// Bitset of the given universe size with exactly the listed bits set.
/// Throws ContextError when an index is out of range.
Bitset bitset_of(std::size_t universe, std::span<const std::size_t> indices);
Bitset bitset_of(std::size_t universe, std::initializer_list<std::size_t> indices);

/// Exact fraction, kept reduced with a positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    /// Reduced fraction num/den; a zero denominator yields 0/1.
    static Rational make(std::int64_t num, std::int64_t den);

    double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rational&) const = default;
};

/// A formal context: named objects, named attributes, and a boolean
/// incidence relation between them. Immutable after construction.
///
/// Object and attribute identity is positional; names are labels. Names are
/// stored as given except that trailing whitespace is stripped, and must be
/// non-empty, free of line breaks, and pairwise distinct.
class FormalContext {
  public:
    /// rows[g] is the attribute set of object g (bitset of size |attributes|).
    FormalContext(std::string name, std::vector<std::string> objects,
                  std::vector<std::string> attributes, std::vector<Bitset> rows);

    /// Convenience constructor from a plain boolean matrix.
    static FormalContext from_rows(std::string name, std::vector<std::string> objects,
                                   std::vector<std::string> attributes,
                                   const std::vector<std::vector<bool>>& rows);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& attributes() const { return attributes_; }

    std::size_t object_count() const { return objects_.size(); }
    std::size_t attribute_count() const { return attributes_.size(); }

    bool incidence(std::size_t object, std::size_t attribute) const;

    /// Attributes of one object (bitset of size |attributes|).
    const Bitset& object_row(std::size_t object) const;
    /// Objects of one attribute (bitset of size |objects|).
    const Bitset& attribute_column(std::size_t attribute) const;

    std::optional<std::size_t> find_object(std::string_view name) const;
    std::optional<std::size_t> find_attribute(std::string_view name) const;

    bool operator==(const FormalContext& other) const;

  private:
    std::string name_;
    std::vector<std::string> objects_;
    std::vector<std::string> attributes_;
    std::vector<Bitset> rows_;
    std::vector<Bitset> columns_;
};

/// Simple size and density figures of a context.
struct ContextStatistics {
    std::size_t object_count = 0;
    std::size_t attribute_count = 0;
    std::size_t incidence_count = 0;
    /// |I| / (|G|*|M|), exactly; 0 when either dimension is 0.
    Rational density;
    /// Filled by callers that ran a concept enumeration.
    std::optional<std::size_t> concept_count;

    bool operator==(const ContextStatistics&) const = default;
};

/// Attributes shared by every object in the set; all attributes when the
/// set is empty.
Bitset object_derivation(const FormalContext& ctx, const Bitset& objects);
std::vector<std::size_t> object_derivation(const FormalContext& ctx,
                                           std::span<const std::size_t> objects);

/// Objects possessing every attribute in the set; all objects when the set
/// is empty.
Bitset attribute_derivation(const FormalContext& ctx, const Bitset& attributes);
std::vector<std::size_t> attribute_derivation(const FormalContext& ctx,
                                              std::span<const std::size_t> attributes);

/// Closure of an attribute set: derivation applied twice. Extensive,
/// monotone, and idempotent.
Bitset attribute_closure(const FormalContext& ctx, const Bitset& attributes);
std::vector<std::size_t> attribute_closure(const FormalContext& ctx,
                                           std::span<const std::size_t> attributes);

/// Restriction to the listed objects and attributes, keeping the original
/// order. Duplicate indices are collapsed.
FormalContext subcontext(const FormalContext& ctx, std::span<const std::size_t> objects,
                         std::span<const std::size_t> attributes);

ContextStatistics compute_statistics(const FormalContext& ctx);

} // namespace fcarepo
