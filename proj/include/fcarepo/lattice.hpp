#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fcarepo/concepts.hpp"
#include "fcarepo/context.hpp"

namespace fcarepo {

/// The concept set ordered as enumerated, plus the Hasse cover relation.
/// covers holds (lower, upper) pairs: lower is covered by upper in the
/// extent-inclusion order; the set is its transitive reduction.
struct ConceptLattice {
    std::vector<FormalConcept> concepts;
    std::vector<std::pair<std::size_t, std::size_t>> covers; // sorted (lower, upper)
    std::size_t top_index = 0;    // extent = all objects
    std::size_t bottom_index = 0; // intent = all attributes

    bool operator==(const ConceptLattice&) const = default;
};

/// Builds order and covers from a complete concept set.  Throws ContextError
/// on an empty list or duplicate concepts.
ConceptLattice build_lattice(std::vector<FormalConcept> concepts);

/// Abstract-unit coordinates per concept.  y is the longest-path rank from
/// the top (top = 0) and strictly increases along every downward cover edge;
/// x orders each rank by neighbor barycenter with the enumeration index as
/// tie-break, centered around 0.
struct DiagramLayout {
    std::vector<double> x;
    std::vector<double> y;
};

DiagramLayout layout_layered(const ConceptLattice& lattice);

/// Reduced labeling: each attribute names the unique maximal concept whose
/// intent contains it; each object names the unique minimal concept whose
/// extent contains it.  Text is pre-joined with ", " per concept.
struct DiagramLabels {
    std::vector<std::string> attributes_text; // one entry per concept, may be empty
    std::vector<std::string> objects_text;
};

DiagramLabels reduced_labels(const FormalContext& ctx, const ConceptLattice& lattice);

/// SVG 1.1 subset (line, circle, text).  Deterministic: identical input gives
/// byte-identical output.
std::string render_svg(const ConceptLattice& lattice, const DiagramLayout& layout,
                       const DiagramLabels& labels);

/// DOT digraph with node ids c<index>; cover edges lower -> upper.  Labels
/// are optional.
std::string render_dot(const ConceptLattice& lattice, const DiagramLabels* labels = nullptr);

} // namespace fcarepo
