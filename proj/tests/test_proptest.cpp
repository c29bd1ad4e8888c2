#include "cantorpack/proptest.hpp"

#include <doctest.h>

#include <algorithm>

using namespace cantorpack;

TEST_CASE("seed 0, 200 cases, every invariant holds") {
    const auto r = run_property_suite(0);
    CHECK(r.cases == 200);
    for (const auto& f : r.failures) INFO(f.invariant << ": " << f.detail << " on " << f.minimized.describe());
    CHECK(r.failures.empty());
    for (const auto& name : invariant_names()) {
        INFO(name);
        CHECK(r.checked.count(name) == 1);
        CHECK(r.checked.at(name) > 0);
    }
}

TEST_CASE("cases are reproducible") {
    std::mt19937_64 a(123), b(123);
    const PropOptions o;
    for (int i = 0; i < 20; ++i) CHECK(random_case(a, o).describe() == random_case(b, o).describe());
}

TEST_CASE("random cases are well formed") {
    std::mt19937_64 rng(9);
    const PropOptions o;
    for (int i = 0; i < 100; ++i) {
        const auto c = random_case(rng, o);
        REQUIRE(c.depth >= 1);
        REQUIRE(c.depth <= o.max_depth);
        CHECK(c.base.size() == c.depth + 1);
        CHECK(c.eps <= c.eps_larger);
        for (std::size_t k = 0; k < c.allowed.size(); ++k) {
            CHECK_FALSE(c.allowed[k].empty());
            CHECK_FALSE(c.subset[k].empty());
            for (unsigned d : c.subset[k])
                CHECK(std::find(c.allowed[k].begin(), c.allowed[k].end(), d) != c.allowed[k].end());
        }
        CHECK(c.subset_set().subset_of(c.set(), c.depth));
    }
}

TEST_CASE("shrinking leaves a passing case alone") {
    std::mt19937_64 rng(4);
    const PropOptions o;
    const auto c = random_case(rng, o);
    CHECK_THROWS(check_invariant("no_such_invariant", c, o));
    CHECK(check_invariant("family_ordering", c, o).empty());
    CHECK(shrink("family_ordering", c, o).describe() == c.describe());
}
