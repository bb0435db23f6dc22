#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "fcarepo/formats.hpp"
#include "fcarepo/lattice.hpp"
#include "testutil.hpp"

using fcarepo::Bitset;
using fcarepo::ConceptLattice;
using fcarepo::FormalConcept;
using fcarepo::FormalContext;

namespace {

bool proper_subset(const Bitset& a, const Bitset& b) {
    return a.is_subset_of(b) && a != b;
}

// O(n^3) transitive reduction of extent inclusion, independent of the
// library's cover construction.
std::vector<std::pair<std::size_t, std::size_t>>
cover_oracle(const std::vector<FormalConcept>& concepts) {
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    const std::size_t n = concepts.size();
    for (std::size_t lo = 0; lo < n; ++lo) {
        for (std::size_t up = 0; up < n; ++up) {
            if (!proper_subset(concepts[lo].extent, concepts[up].extent)) continue;
            bool direct = true;
            for (std::size_t mid = 0; mid < n; ++mid) {
                if (proper_subset(concepts[lo].extent, concepts[mid].extent) &&
                    proper_subset(concepts[mid].extent, concepts[up].extent)) {
                    direct = false;
                    break;
                }
            }
            if (direct) covers.emplace_back(lo, up);
        }
    }
    std::sort(covers.begin(), covers.end());
    return covers;
}

FormalContext beings() {
    return fcarepo::parse_burmeister(
        testutil::read_file(testutil::data_dir() / "livingbeings_en.cxt"));
}

} // namespace

TEST_CASE("the contranominal 2x2 lattice is the diamond") {
    const auto concepts = fcarepo::enumerate_concepts(testutil::contranominal(2));
    REQUIRE(concepts.size() == 4);
    ConceptLattice lattice = fcarepo::build_lattice(concepts);
    CHECK(lattice.covers.size() == 4);
    CHECK(lattice.concepts[lattice.top_index].extent.count() == 2);
    CHECK(lattice.concepts[lattice.bottom_index].intent.count() == 2);
    CHECK(lattice.covers == cover_oracle(concepts));
}

TEST_CASE("covers match the transitive-reduction oracle") {
    for (const char* name : {"livingbeings_en.cxt", "fcatools_en.cxt"}) {
        const auto ctx = fcarepo::parse_burmeister(testutil::read_file(testutil::data_dir() / name));
        const auto concepts = fcarepo::enumerate_concepts(ctx);
        CHECK(fcarepo::build_lattice(concepts).covers == cover_oracle(concepts));
    }

    std::mt19937 rng(19391945);
    for (int trial = 0; trial < 40; ++trial) {
        FormalContext ctx = testutil::random_context(rng, 8, 8);
        const auto concepts = fcarepo::enumerate_concepts(ctx);
        CAPTURE(trial);
        CHECK(fcarepo::build_lattice(concepts).covers == cover_oracle(concepts));
    }
}

TEST_CASE("lattice rejects bad input") {
    CHECK_THROWS_AS(fcarepo::build_lattice({}), fcarepo::ContextError);
    const auto concepts = fcarepo::enumerate_concepts(testutil::contranominal(2));
    auto doubled = concepts;
    doubled.push_back(concepts[0]);
    CHECK_THROWS_AS(fcarepo::build_lattice(doubled), fcarepo::ContextError);
}

TEST_CASE("layered layout ranks strictly increase downward") {
    const auto concepts = fcarepo::enumerate_concepts(beings());
    ConceptLattice lattice = fcarepo::build_lattice(concepts);
    fcarepo::DiagramLayout layout = fcarepo::layout_layered(lattice);
    REQUIRE(layout.x.size() == lattice.concepts.size());
    CHECK(layout.y[lattice.top_index] == 0.0);
    for (const auto& [lower, upper] : lattice.covers) {
        CHECK(layout.y[lower] > layout.y[upper]);
    }
    // no two nodes share a slot
    std::set<std::pair<double, double>> slots;
    for (std::size_t i = 0; i < layout.x.size(); ++i) {
        CHECK(slots.insert({layout.x[i], layout.y[i]}).second);
    }
}

TEST_CASE("reduced labels place every name exactly once") {
    FormalContext ctx = beings();
    ConceptLattice lattice = fcarepo::build_lattice(fcarepo::enumerate_concepts(ctx));
    fcarepo::DiagramLabels labels = fcarepo::reduced_labels(ctx, lattice);

    std::size_t attribute_mentions = 0;
    for (std::size_t i = 0; i < lattice.concepts.size(); ++i) {
        if (labels.attributes_text[i].empty()) continue;
        ++attribute_mentions;
        // every attribute named here must belong to the concept's intent
        for (std::size_t j = 0; j < ctx.attribute_count(); ++j) {
            if (labels.attributes_text[i].find(ctx.attributes()[j]) != std::string::npos) {
                CHECK(lattice.concepts[i].intent.test(j));
            }
        }
    }
    CHECK(attribute_mentions > 0);

    std::string all_objects;
    for (const auto& text : labels.objects_text) all_objects += text + "|";
    for (const auto& g : ctx.objects()) {
        CHECK(all_objects.find(g) != std::string::npos);
    }
}

TEST_CASE("svg rendering is deterministic and well-formed") {
    FormalContext ctx = beings();
    auto render = [&] {
        ConceptLattice lattice = fcarepo::build_lattice(fcarepo::enumerate_concepts(ctx));
        return fcarepo::render_svg(lattice, fcarepo::layout_layered(lattice),
                                   fcarepo::reduced_labels(ctx, lattice));
    };
    const std::string first = render();
    const std::string second = render();
    CHECK(first == second);
    const bool starts_svg = first.rfind("<svg", 0) == 0 || first.rfind("<?xml", 0) == 0;
    CHECK(starts_svg);
    CHECK(first.find("</svg>") != std::string::npos);
    CHECK(first.find("<circle") != std::string::npos);
    CHECK(first.find("<line") != std::string::npos);
}

TEST_CASE("svg escapes markup in names") {
    FormalContext ctx("x", {"a&b"}, {"<m>"}, {fcarepo::bitset_of(1, {0ul})});
    ConceptLattice lattice = fcarepo::build_lattice(fcarepo::enumerate_concepts(ctx));
    const std::string svg = fcarepo::render_svg(lattice, fcarepo::layout_layered(lattice),
                                                fcarepo::reduced_labels(ctx, lattice));
    CHECK(svg.find("a&amp;b") != std::string::npos);
    CHECK(svg.find("&lt;m&gt;") != std::string::npos);
    CHECK(svg.find("<m>") == std::string::npos);
}

TEST_CASE("dot rendering lists one node per concept and one edge per cover") {
    FormalContext ctx = beings();
    ConceptLattice lattice = fcarepo::build_lattice(fcarepo::enumerate_concepts(ctx));
    fcarepo::DiagramLabels labels = fcarepo::reduced_labels(ctx, lattice);
    const std::string dot = fcarepo::render_dot(lattice, &labels);
    CHECK(dot.rfind("digraph", 0) == 0);
    std::size_t edges = 0;
    for (std::size_t pos = dot.find("->"); pos != std::string::npos;
         pos = dot.find("->", pos + 2)) {
        ++edges;
    }
    CHECK(edges == lattice.covers.size());
    CHECK(dot.find("c0") != std::string::npos);
    CHECK(fcarepo::render_dot(lattice, &labels) == dot);
}
