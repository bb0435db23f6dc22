#include "fcarepo/context.hpp"

#include <algorithm>
#include <numeric>

namespace fcarepo {

std::vector<std::size_t> set_indices(const Bitset& bits) {
    std::vector<std::size_t> out;
    out.reserve(bits.count());
    for (auto i = bits.find_first(); i != Bitset::npos; i = bits.find_next(i)) {
        out.push_back(i);
    }
    return out;
}

Bitset bitset_of(std::size_t universe, std::span<const std::size_t> indices) {
    Bitset bits(universe);
    for (auto i : indices) {
        if (i >= universe) {
            throw ContextError("index " + std::to_string(i) + " out of range (size " +
                               std::to_string(universe) + ")");
        }
        bits.set(i);
    }
    return bits;
}

Bitset bitset_of(std::size_t universe, std::initializer_list<std::size_t> indices) {
    return bitset_of(universe, std::span<const std::size_t>(indices.begin(), indices.size()));
}

Rational Rational::make(std::int64_t num, std::int64_t den) {
    if (den == 0) return Rational{0, 1};
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return Rational{g == 0 ? 0 : num / g, g == 0 ? 1 : den / g};
}

namespace {

bool is_trailing_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

std::string strip_trailing(std::string name) {
    while (!name.empty() && is_trailing_space(name.back())) name.pop_back();
    return name;
}

void check_names(const std::vector<std::string>& names, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) {
            throw ContextError(std::string(what) + " name at position " + std::to_string(i) +
                               " is empty");
        }
        if (names[i].find_first_of("\r\n") != std::string::npos) {
            throw ContextError(std::string(what) + " name at position " + std::to_string(i) +
                               " contains a line break");
        }
    }
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
        throw ContextError(std::string("duplicate ") + what + " name \"" + *dup + "\"");
    }
}

} // namespace

FormalContext::FormalContext(std::string name, std::vector<std::string> objects,
                             std::vector<std::string> attributes, std::vector<Bitset> rows)
    : name_(strip_trailing(std::move(name))), objects_(std::move(objects)),
      attributes_(std::move(attributes)), rows_(std::move(rows)) {
    for (auto& s : objects_) s = strip_trailing(std::move(s));
    for (auto& s : attributes_) s = strip_trailing(std::move(s));
    if (name_.find_first_of("\r\n") != std::string::npos) {
        throw ContextError("context name contains a line break");
    }
    check_names(objects_, "object");
    check_names(attributes_, "attribute");
    if (rows_.size() != objects_.size()) {
        throw ContextError("incidence has " + std::to_string(rows_.size()) + " rows, expected " +
                           std::to_string(objects_.size()));
    }
    for (std::size_t g = 0; g < rows_.size(); ++g) {
        if (rows_[g].size() != attributes_.size()) {
            throw ContextError("incidence row " + std::to_string(g) + " has " +
                               std::to_string(rows_[g].size()) + " columns, expected " +
                               std::to_string(attributes_.size()));
        }
    }
    columns_.assign(attributes_.size(), Bitset(objects_.size()));
    for (std::size_t g = 0; g < rows_.size(); ++g) {
        for (auto m = rows_[g].find_first(); m != Bitset::npos; m = rows_[g].find_next(m)) {
            columns_[m].set(g);
        }
    }
}

FormalContext FormalContext::from_rows(std::string name, std::vector<std::string> objects,
                                       std::vector<std::string> attributes,
                                       const std::vector<std::vector<bool>>& rows) {
    std::vector<Bitset> bits;
    bits.reserve(rows.size());
    for (const auto& row : rows) {
        Bitset b(attributes.size());
        if (row.size() != attributes.size()) {
            throw ContextError("incidence row has " + std::to_string(row.size()) +
                               " columns, expected " + std::to_string(attributes.size()));
        }
        for (std::size_t m = 0; m < row.size(); ++m) {
            if (row[m]) b.set(m);
        }
        bits.push_back(std::move(b));
    }
    return FormalContext(std::move(name), std::move(objects), std::move(attributes),
                         std::move(bits));
}

bool FormalContext::incidence(std::size_t object, std::size_t attribute) const {
    if (object >= objects_.size()) {
        throw ContextError("object index " + std::to_string(object) + " out of range");
    }
    if (attribute >= attributes_.size()) {
        throw ContextError("attribute index " + std::to_string(attribute) + " out of range");
    }
    return rows_[object].test(attribute);
}

const Bitset& FormalContext::object_row(std::size_t object) const {
    if (object >= objects_.size()) {
        throw ContextError("object index " + std::to_string(object) + " out of range");
    }
    return rows_[object];
}

const Bitset& FormalContext::attribute_column(std::size_t attribute) const {
    if (attribute >= attributes_.size()) {
        throw ContextError("attribute index " + std::to_string(attribute) + " out of range");
    }
    return columns_[attribute];
}

std::optional<std::size_t> FormalContext::find_object(std::string_view name) const {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
        if (objects_[i] == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> FormalContext::find_attribute(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i] == name) return i;
    }
    return std::nullopt;
}

bool FormalContext::operator==(const FormalContext& other) const {
    return name_ == other.name_ && objects_ == other.objects_ &&
           attributes_ == other.attributes_ && rows_ == other.rows_;
}

namespace {

void check_universe(std::size_t got, std::size_t expected, const char* what) {
    if (got != expected) {
        throw ContextError(std::string(what) + " set has universe " + std::to_string(got) +
                           ", context has " + std::to_string(expected));
    }
}

} // namespace

Bitset object_derivation(const FormalContext& ctx, const Bitset& objects) {
    check_universe(objects.size(), ctx.object_count(), "object");
    Bitset shared(ctx.attribute_count());
    shared.set();
    for (auto g = objects.find_first(); g != Bitset::npos; g = objects.find_next(g)) {
        shared &= ctx.object_row(g);
    }
    return shared;
}

std::vector<std::size_t> object_derivation(const FormalContext& ctx,
                                           std::span<const std::size_t> objects) {
    return set_indices(object_derivation(ctx, bitset_of(ctx.object_count(), objects)));
}

Bitset attribute_derivation(const FormalContext& ctx, const Bitset& attributes) {
    check_universe(attributes.size(), ctx.attribute_count(), "attribute");
    Bitset shared(ctx.object_count());
    shared.set();
    for (auto m = attributes.find_first(); m != Bitset::npos; m = attributes.find_next(m)) {
        shared &= ctx.attribute_column(m);
    }
    return shared;
}

std::vector<std::size_t> attribute_derivation(const FormalContext& ctx,
                                              std::span<const std::size_t> attributes) {
    return set_indices(attribute_derivation(ctx, bitset_of(ctx.attribute_count(), attributes)));
}

Bitset attribute_closure(const FormalContext& ctx, const Bitset& attributes) {
    return object_derivation(ctx, attribute_derivation(ctx, attributes));
}

std::vector<std::size_t> attribute_closure(const FormalContext& ctx,
                                           std::span<const std::size_t> attributes) {
    return set_indices(attribute_closure(ctx, bitset_of(ctx.attribute_count(), attributes)));
}

FormalContext subcontext(const FormalContext& ctx, std::span<const std::size_t> objects,
                         std::span<const std::size_t> attributes) {
    std::vector<std::size_t> objs(objects.begin(), objects.end());
    std::vector<std::size_t> attrs(attributes.begin(), attributes.end());
    std::sort(objs.begin(), objs.end());
    objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());

    std::vector<std::string> object_names;
    std::vector<std::string> attribute_names;
    for (auto g : objs) {
        if (g >= ctx.object_count()) {
            throw ContextError("object index " + std::to_string(g) + " out of range");
        }
        object_names.push_back(ctx.objects()[g]);
    }
    for (auto m : attrs) {
        if (m >= ctx.attribute_count()) {
            throw ContextError("attribute index " + std::to_string(m) + " out of range");
        }
        attribute_names.push_back(ctx.attributes()[m]);
    }
    std::vector<Bitset> rows;
    rows.reserve(objs.size());
    for (auto g : objs) {
        Bitset row(attrs.size());
        for (std::size_t j = 0; j < attrs.size(); ++j) {
            if (ctx.incidence(g, attrs[j])) row.set(j);
        }
        rows.push_back(std::move(row));
    }
    return FormalContext(ctx.name(), std::move(object_names), std::move(attribute_names),
                         std::move(rows));
}

ContextStatistics compute_statistics(const FormalContext& ctx) {
    ContextStatistics stats;
    stats.object_count = ctx.object_count();
    stats.attribute_count = ctx.attribute_count();
    for (std::size_t g = 0; g < ctx.object_count(); ++g) {
        stats.incidence_count += ctx.object_row(g).count();
    }
    stats.density = Rational::make(static_cast<std::int64_t>(stats.incidence_count),
                                   static_cast<std::int64_t>(stats.object_count) *
                                       static_cast<std::int64_t>(stats.attribute_count));
    return stats;
}

} // namespace fcarepo
