#include "doctest.h"

#include <cstdlib>

#include "toposeg/error.hpp"
#include "toposeg/fixtures.hpp"
#include "toposeg/metrics.hpp"
#include "toposeg/oracles/sweep.hpp"

using namespace toposeg;

namespace {

void check_betti(FixtureKind kind, int size, std::int64_t beta0, std::int64_t beta1) {
    const auto mask = gen_fixture(kind, size);
    const auto betti = component_betti(mask);
    CHECK(betti.beta0 == beta0);
    CHECK(betti.beta1 == beta1);
    // Independent route: flood fill + Euler on the thresholded set.
    const auto sweep = oracles::sweep_betti_at(mask, FiltrationDirection::Superlevel, 1.0);
    CHECK(sweep.beta0 == beta0);
    CHECK(sweep.beta1 == beta1);
}

} // namespace

TEST_SUITE("fixtures") {

TEST_CASE("documented Betti numbers") {
    check_betti(FixtureKind::Ring, 32, 1, 1);
    check_betti(FixtureKind::BrokenRing, 32, 1, 0);
    check_betti(FixtureKind::Line, 32, 1, 0);
    check_betti(FixtureKind::BrokenLine, 32, 2, 0);
    check_betti(FixtureKind::Grid, 32, 1, 9);
    // Minimum size still has the advertised topology.
    check_betti(FixtureKind::Ring, 8, 1, 1);
    check_betti(FixtureKind::BrokenRing, 8, 1, 0);
    check_betti(FixtureKind::Grid, 8, 1, 9);
}

TEST_CASE("broken ring differs from the ring by a 3-row east notch") {
    const int size = 32;
    const auto ring = gen_fixture(FixtureKind::Ring, size);
    const auto broken = gen_fixture(FixtureKind::BrokenRing, size);
    int removed = 0;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            if (ring.at(r, c) == broken.at(r, c)) continue;
            CHECK(ring.at(r, c) == 1);
            CHECK(broken.at(r, c) == 0);
            CHECK(std::abs(r - size / 2) <= 1);
            CHECK(c >= size / 2);
            ++removed;
        }
    CHECK(removed > 0);
    // The notch spans exactly three rows.
    bool rows[3] = {false, false, false};
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            if (ring.at(r, c) != broken.at(r, c)) rows[r - size / 2 + 1] = true;
    CHECK(rows[0]);
    CHECK(rows[1]);
    CHECK(rows[2]);
}

TEST_CASE("random blobs are deterministic per seed with radius >= 2 disks") {
    const auto a = gen_fixture(FixtureKind::RandomBlobs, 24, 5);
    const auto b = gen_fixture(FixtureKind::RandomBlobs, 24, 5);
    CHECK(a == b);

    std::int64_t fg = 0;
    for (auto v : a.data()) fg += v;
    CHECK(fg >= 13); // at least 3 disks of radius 2 (13 pixels each), overlaps allowed
    CHECK(component_betti(a).beta0 >= 1);

    const auto c = gen_fixture(FixtureKind::RandomBlobs, 24, 6);
    CHECK(a != c); // different seeds place different disks (true for these seeds)
}

TEST_CASE("name round-trip and validation") {
    for (auto kind : {FixtureKind::Ring, FixtureKind::BrokenRing, FixtureKind::Line,
                      FixtureKind::BrokenLine, FixtureKind::Grid, FixtureKind::RandomBlobs})
        CHECK(fixture_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(fixture_kind_from_string("pentagon"), ValidationError);
    CHECK_THROWS_AS(gen_fixture(FixtureKind::Ring, 7), ValidationError);
}

} // TEST_SUITE
