#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "toposeg/cubical.hpp"
#include "toposeg/error.hpp"
#include "toposeg/oracles/naive_reduction.hpp"
#include "toposeg/oracles/sweep.hpp"
#include "toposeg/persistence.hpp"

using namespace toposeg;

namespace {

Grid<double> random_distinct(int size, std::uint64_t seed) {
    Grid<double> g(size, size);
    std::iota(g.data().begin(), g.data().end(), 1.0);
    std::mt19937_64 rng(seed);
    std::shuffle(g.data().begin(), g.data().end(), rng);
    return g;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

TEST_SUITE("persistence") {

TEST_CASE("hand-worked 3x3 image: all pairs and betti readings exact") {
    // Central peak 5 surrounded by a value-2 ring with two value-1 basins in
    // opposite corners.
    const Grid<double> img(3, 3, {1, 2, 2, 2, 5, 2, 2, 2, 1});
    const auto filt = CubicalFiltration::build(img, FiltrationDirection::Sublevel);
    const auto diagram = compute_persistence(filt);

    REQUIRE(diagram.pairs.size() == 3);
    const auto d0 = diagram.indices_of_dim(0);
    const auto d1 = diagram.indices_of_dim(1);
    REQUIRE(d0.size() == 2);
    REQUIRE(d1.size() == 1);

    std::vector<std::pair<double, double>> bars0;
    for (int i : d0)
        bars0.emplace_back(diagram.pairs[static_cast<std::size_t>(i)].birth,
                           diagram.pairs[static_cast<std::size_t>(i)].death);
    std::sort(bars0.begin(), bars0.end());
    CHECK(bars0[0] == std::pair{1.0, 2.0}); // second basin merges at the ring
    CHECK(bars0[1] == std::pair{1.0, kInf}); // the surviving component
    const auto& loop = diagram.pairs[static_cast<std::size_t>(d1[0])];
    CHECK(loop.birth == 2.0); // ring closes
    CHECK(loop.death == 5.0); // peak fills the loop

    CHECK(betti_at(diagram, 1.0) == BettiVector{2, 0});
    CHECK(betti_at(diagram, 2.0) == BettiVector{1, 1});
    CHECK(betti_at(diagram, 5.0) == BettiVector{1, 0});
    CHECK(betti_at(diagram, 0.5) == BettiVector{0, 0});

    // The essential bar never dies; any finite threshold past birth sees it.
    CHECK(betti_at(diagram, 1e12) == BettiVector{1, 0});
}

TEST_CASE("reduction modes and independent oracle agree on random grids") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto img = random_distinct(6, seed);
        for (auto dir : {FiltrationDirection::Sublevel, FiltrationDirection::Superlevel}) {
            const auto filt = CubicalFiltration::build(img, dir);
            const auto fast = compute_persistence(filt, ReductionMode::Clearing);
            const auto slow = compute_persistence(filt, ReductionMode::Naive);
            auto a = oracles::to_bars(fast);
            auto b = oracles::to_bars(slow);
            auto c = oracles::naive_persistence(img, dir);
            oracles::canonical_sort(a);
            oracles::canonical_sort(b);
            oracles::canonical_sort(c);
            CHECK(a == b);
            CHECK(a == c);
        }
    }
}

TEST_CASE("betti counts match the threshold-sweep oracle at and between values") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto img = random_distinct(7, seed * 13 + 1);
        for (auto dir : {FiltrationDirection::Sublevel, FiltrationDirection::Superlevel}) {
            const auto diagram = compute_persistence(CubicalFiltration::build(img, dir));
            std::vector<double> probes;
            for (auto v : img.data()) probes.push_back(v);
            std::sort(probes.begin(), probes.end());
            const std::size_t n_values = probes.size();
            for (std::size_t i = 0; i + 1 < n_values; ++i)
                probes.push_back(0.5 * (probes[i] + probes[i + 1]));
            for (double t : probes)
                CHECK(betti_at(diagram, t) == oracles::sweep_betti_at(img, dir, t));
        }
    }
}

TEST_CASE("zero-persistence pairs are dropped: constant plateau yields essentials only") {
    const Grid<double> flat(5, 5, 2.0);
    for (auto dir : {FiltrationDirection::Sublevel, FiltrationDirection::Superlevel}) {
        const auto diagram = compute_persistence(CubicalFiltration::build(flat, dir));
        REQUIRE(diagram.pairs.size() == 1);
        CHECK(diagram.pairs[0].dim == 0);
        CHECK(diagram.pairs[0].birth == 2.0);
        CHECK(diagram.pairs[0].essential());
    }
}

TEST_CASE("essential deaths carry the direction's infinity") {
    const auto img = random_distinct(5, 77);
    const auto sub = compute_persistence(CubicalFiltration::build(img, FiltrationDirection::Sublevel));
    const auto sup =
        compute_persistence(CubicalFiltration::build(img, FiltrationDirection::Superlevel));
    int essentials = 0;
    for (const auto& pair : sub.pairs) {
        CHECK(pair.birth <= pair.death);
        if (pair.essential()) {
            CHECK(pair.death == kInf);
            CHECK(pair.death_row() == -1);
            ++essentials;
        }
    }
    CHECK(essentials == 1);
    for (const auto& pair : sup.pairs) {
        CHECK(pair.birth >= pair.death);
        if (pair.essential()) CHECK(pair.death == -kInf);
    }
}

TEST_CASE("finite bars point at real cells with matching values") {
    const auto img = random_distinct(6, 5);
    const auto filt = CubicalFiltration::build(img, FiltrationDirection::Superlevel);
    const auto diagram = compute_persistence(filt);
    for (const auto& pair : diagram.pairs) {
        CHECK(img.at(pair.birth_row(), pair.birth_col()) == pair.birth);
        CHECK(pair.birth_cell.filtration_value == pair.birth);
        CHECK(pair.birth_cell.dim == pair.dim);
        if (!pair.essential()) {
            CHECK(img.at(pair.death_row(), pair.death_col()) == pair.death);
            CHECK(pair.death_cell->dim == pair.dim + 1);
        }
    }
}

TEST_CASE("csv round-trip is byte-identical and preserves every field") {
    const auto img = random_distinct(6, 21);
    for (auto dir : {FiltrationDirection::Sublevel, FiltrationDirection::Superlevel}) {
        const auto diagram = compute_persistence(CubicalFiltration::build(img, dir));
        const auto csv = diagram_to_csv(diagram);
        const auto parsed = diagram_from_csv(csv);
        CHECK(diagram_to_csv(parsed) == csv);
        REQUIRE(parsed.pairs.size() == diagram.pairs.size());
        for (std::size_t i = 0; i < diagram.pairs.size(); ++i) {
            CHECK(parsed.pairs[i].dim == diagram.pairs[i].dim);
            CHECK(parsed.pairs[i].birth == diagram.pairs[i].birth);
            CHECK(parsed.pairs[i].death == diagram.pairs[i].death);
            CHECK(parsed.pairs[i].birth_row() == diagram.pairs[i].birth_row());
            CHECK(parsed.pairs[i].birth_col() == diagram.pairs[i].birth_col());
            CHECK(parsed.pairs[i].death_row() == diagram.pairs[i].death_row());
            CHECK(parsed.pairs[i].death_col() == diagram.pairs[i].death_col());
            CHECK(parsed.pairs[i].essential() == diagram.pairs[i].essential());
        }
    }
}

TEST_CASE("malformed csv is rejected") {
    CHECK_THROWS_AS(diagram_from_csv(""), ValidationError);
    CHECK_THROWS_AS(diagram_from_csv("dim,birth\n"), ValidationError);
    CHECK_THROWS_AS(
        diagram_from_csv("dim,birth,death,birth_row,birth_col,death_row,death_col\n0,1,2,3\n"),
        ValidationError);
    CHECK_THROWS_AS(
        diagram_from_csv("dim,birth,death,birth_row,birth_col,death_row,death_col\nx,1,2,0,0,1,1\n"),
        ValidationError);
}

TEST_CASE("reduction counter observes every diagram computation") {
    const auto img = random_distinct(4, 2);
    const auto filt = CubicalFiltration::build(img, FiltrationDirection::Sublevel);
    const auto before = diagram_computation_count();
    (void)compute_persistence(filt);
    (void)compute_persistence(filt, ReductionMode::Naive);
    CHECK(diagram_computation_count() == before + 2);
}

} // TEST_SUITE
