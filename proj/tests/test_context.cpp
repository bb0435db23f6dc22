#include <doctest.h>

#include "fcarepo/context.hpp"
#include "fcarepo/errors.hpp"
#include "fcarepo/formats.hpp"
#include "testutil.hpp"

using fcarepo::Bitset;
using fcarepo::FormalContext;

namespace {

FormalContext small() {
    // objects: o0 {a0,a1}, o1 {a1}, o2 {}
    std::vector<Bitset> rows(3, Bitset(2));
    rows[0].set(0);
    rows[0].set(1);
    rows[1].set(1);
    return FormalContext("small", {"o0", "o1", "o2"}, {"a0", "a1"}, rows);
}

} // namespace

TEST_CASE("context construction checks invariants") {
    CHECK_THROWS_AS(FormalContext("x", {"a", "a"}, {"m"}, {Bitset(1), Bitset(1)}),
                    fcarepo::ContextError);
    CHECK_THROWS_AS(FormalContext("x", {""}, {"m"}, {Bitset(1)}), fcarepo::ContextError);
    CHECK_THROWS_AS(FormalContext("x", {"a\nb"}, {"m"}, {Bitset(1)}), fcarepo::ContextError);
    CHECK_THROWS_AS(FormalContext("x", {"a"}, {"m", "m"}, {Bitset(2)}), fcarepo::ContextError);
    CHECK_THROWS_AS(FormalContext("x", {"a"}, {"m"}, {Bitset(2)}), fcarepo::ContextError);
    CHECK_THROWS_AS(FormalContext("x\ny", {"a"}, {"m"}, {Bitset(1)}), fcarepo::ContextError);
}

TEST_CASE("trailing whitespace is stripped from names") {
    FormalContext ctx("n ", {"a \t"}, {"m  "}, {Bitset(1)});
    CHECK(ctx.name() == "n");
    CHECK(ctx.objects()[0] == "a");
    CHECK(ctx.attributes()[0] == "m");
}

TEST_CASE("derivation operators") {
    FormalContext ctx = small();

    Bitset all_objects(3);
    all_objects.set();
    CHECK(fcarepo::object_derivation(ctx, all_objects).none());

    Bitset first_two(3);
    first_two.set(0);
    first_two.set(1);
    Bitset shared = fcarepo::object_derivation(ctx, first_two);
    CHECK(shared.count() == 1);
    CHECK(shared.test(1));

    Bitset a1(2);
    a1.set(1);
    Bitset extent = fcarepo::attribute_derivation(ctx, a1);
    CHECK(extent.count() == 2);
    CHECK(extent.test(0));
    CHECK(extent.test(1));

    // empty attribute set derives to all objects
    CHECK(fcarepo::attribute_derivation(ctx, Bitset(2)).count() == 3);
}

TEST_CASE("attribute closure is a closure operator") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 50; ++trial) {
        FormalContext ctx = testutil::random_context(rng, 8, 8);
        const std::size_t m = ctx.attribute_count();
        for (int inner = 0; inner < 20; ++inner) {
            Bitset set(m);
            for (std::size_t j = 0; j < m; ++j) {
                if (rng() % 2) set.set(j);
            }
            Bitset closed = fcarepo::attribute_closure(ctx, set);
            CHECK(set.is_subset_of(closed));                        // extensive
            CHECK(fcarepo::attribute_closure(ctx, closed) == closed); // idempotent
            Bitset superset = closed;
            if (m > 0) superset.set(rng() % m);
            Bitset closed_superset = fcarepo::attribute_closure(ctx, superset);
            CHECK(closed.is_subset_of(closed_superset)); // monotone
        }
    }
}

TEST_CASE("statistics of the tool comparison fixture") {
    const std::string text = testutil::read_file(testutil::data_dir() / "fcatools_en.cxt");
    FormalContext ctx = fcarepo::parse_burmeister(text);
    auto stats = fcarepo::compute_statistics(ctx);
    CHECK(stats.object_count == 8);
    CHECK(stats.attribute_count == 15);
    CHECK(stats.incidence_count == 65);
    CHECK(stats.density.num == 13);
    CHECK(stats.density.den == 24);
}

TEST_CASE("subcontext selects rows and columns") {
    FormalContext ctx = small();
    const std::size_t objs[] = {0, 2};
    const std::size_t attrs[] = {1};
    FormalContext sub = fcarepo::subcontext(ctx, objs, attrs);
    CHECK(sub.object_count() == 2);
    CHECK(sub.attribute_count() == 1);
    CHECK(sub.objects()[1] == "o2");
    CHECK(sub.incidence(0, 0));
    CHECK_FALSE(sub.incidence(1, 0));
}

TEST_CASE("empty context statistics") {
    FormalContext ctx("", {}, {}, {});
    auto stats = fcarepo::compute_statistics(ctx);
    CHECK(stats.object_count == 0);
    CHECK(stats.incidence_count == 0);
    CHECK(stats.density.num == 0);
    CHECK(stats.density.den == 1);
}
