#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "toposeg/cubical.hpp"
#include "toposeg/error.hpp"
#include "toposeg/oracles/spatial_matching.hpp"
#include "toposeg/persistence.hpp"

using namespace toposeg;

namespace {

// Distinct likelihood-style values, shuffled: (i+1)/(n^2+1).
Grid<double> random_levels(int size, std::uint64_t seed) {
    Grid<double> g(size, size);
    const double denom = static_cast<double>(size) * size + 1.0;
    for (int i = 0; i < g.size(); ++i)
        g.data()[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / denom;
    std::mt19937_64 rng(seed);
    std::shuffle(g.data().begin(), g.data().end(), rng);
    return g;
}

Grid<double> pointwise_min(const Grid<double>& a, const Grid<double>& b) {
    Grid<double> out(a.width(), a.height());
    for (int i = 0; i < a.size(); ++i)
        out.data()[static_cast<std::size_t>(i)] =
            std::min(a.data()[static_cast<std::size_t>(i)], b.data()[static_cast<std::size_t>(i)]);
    return out;
}

struct BarKey {
    int row, col;
    auto operator<=>(const BarKey&) const = default;
};

struct PartnerInfo {
    bool matched = false;
    double birth = 0, death = 0;
    int row = -1, col = -1;
    bool essential = false;
    friend bool operator==(const PartnerInfo&, const PartnerInfo&) = default;
};

} // namespace

TEST_SUITE("image_persistence") {

TEST_CASE("including a filtration into itself matches every bar to itself") {
    const auto img = random_levels(6, 4);
    for (auto dir : {FiltrationDirection::Sublevel, FiltrationDirection::Superlevel}) {
        const auto filt = CubicalFiltration::build(img, dir);
        const auto result = image_persistence(filt, filt);
        REQUIRE(result.sub_diagram.pairs.size() == result.ambient_diagram.pairs.size());
        REQUIRE(result.ambient_match.size() == result.sub_diagram.pairs.size());
        for (std::size_t i = 0; i < result.sub_diagram.pairs.size(); ++i) {
            REQUIRE(result.ambient_match[i].has_value());
            const auto& s = result.sub_diagram.pairs[i];
            const auto& a =
                result.ambient_diagram.pairs[static_cast<std::size_t>(*result.ambient_match[i])];
            CHECK(s.dim == a.dim);
            CHECK(s.birth == a.birth);
            CHECK(s.death == a.death);
            CHECK(s.birth_row() == a.birth_row());
            CHECK(s.birth_col() == a.birth_col());
        }
    }
}

TEST_CASE("inclusion precondition is enforced") {
    const auto img = random_levels(5, 9);
    auto raised = img;
    for (auto& v : raised.data()) v += 1.0;

    const auto lo = CubicalFiltration::build(img, FiltrationDirection::Sublevel);
    const auto hi = CubicalFiltration::build(raised, FiltrationDirection::Sublevel);
    // Sublevel: the ambient filtration must be pointwise <= the sub one.
    CHECK_NOTHROW(image_persistence(lo, hi));
    CHECK_THROWS_AS(image_persistence(hi, lo), ValidationError);

    const auto other_dir = CubicalFiltration::build(img, FiltrationDirection::Superlevel);
    CHECK_THROWS_AS(image_persistence(lo, other_dir), ValidationError);

    const auto small = CubicalFiltration::build(random_levels(4, 9), FiltrationDirection::Sublevel);
    CHECK_THROWS_AS(image_persistence(lo, small), ValidationError);
}

TEST_CASE("dim-0 matching agrees with the union-find spatial oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto pred = random_levels(8, seed * 2 + 1);
        const auto target = random_levels(8, seed * 2 + 2);
        const auto common = pointwise_min(pred, target);

        const auto ambient = CubicalFiltration::build(pred, FiltrationDirection::Superlevel);
        const auto sub = CubicalFiltration::build(common, FiltrationDirection::Superlevel);
        const auto engine = image_persistence(ambient, sub);
        const auto oracle = oracles::spatial_dim0_matching(common, pred);

        // Collect engine dim-0 sub bars keyed by their birth pixel.
        std::map<BarKey, PartnerInfo> engine_map;
        const auto d0 = engine.sub_diagram.indices_of_dim(0);
        for (int i : d0) {
            const auto& s = engine.sub_diagram.pairs[static_cast<std::size_t>(i)];
            PartnerInfo info;
            if (engine.ambient_match[static_cast<std::size_t>(i)]) {
                const auto& a = engine.ambient_diagram.pairs[static_cast<std::size_t>(
                    *engine.ambient_match[static_cast<std::size_t>(i)])];
                info = {true, a.birth, a.death, a.birth_row(), a.birth_col(), a.essential()};
            }
            engine_map[{s.birth_row(), s.birth_col()}] = info;
        }

        std::map<BarKey, PartnerInfo> oracle_map;
        REQUIRE(oracle.ambient_match.size() == oracle.sub_bars.size());
        for (std::size_t i = 0; i < oracle.sub_bars.size(); ++i) {
            const auto& s = oracle.sub_bars[i];
            PartnerInfo info;
            if (oracle.ambient_match[i]) {
                const auto& a = oracle.ambient_bars[static_cast<std::size_t>(*oracle.ambient_match[i])];
                info = {true, a.birth, a.death, a.birth_row, a.birth_col, a.essential};
            }
            oracle_map[{s.birth_row, s.birth_col}] = info;
        }

        CHECK(engine_map.size() == d0.size()); // unique birth pixels
        CHECK(engine_map == oracle_map);
    }
}

TEST_CASE("matching is injective, dim-preserving, and strictly overlapping") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pred = random_levels(8, 1000 + seed);
        const auto target = random_levels(8, 2000 + seed);
        const auto common = pointwise_min(pred, target);
        const auto result =
            image_persistence(CubicalFiltration::build(pred, FiltrationDirection::Superlevel),
                              CubicalFiltration::build(common, FiltrationDirection::Superlevel));

        std::set<int> used;
        for (std::size_t i = 0; i < result.sub_diagram.pairs.size(); ++i) {
            if (!result.ambient_match[i]) continue;
            const int j = *result.ambient_match[i];
            CHECK(used.insert(j).second); // no ambient bar claimed twice
            const auto& s = result.sub_diagram.pairs[i];
            const auto& a = result.ambient_diagram.pairs[static_cast<std::size_t>(j)];
            CHECK(s.dim == a.dim);
            // Superlevel image bar [sub birth, ambient death) must be
            // non-empty: the class is created before its image dies.
            if (!s.essential() && !a.essential()) CHECK(s.birth > a.death);
        }
    }
}

TEST_CASE("essential bars pair with essential bars") {
    const auto pred = random_levels(7, 50);
    const auto common = pointwise_min(pred, random_levels(7, 51));
    const auto result =
        image_persistence(CubicalFiltration::build(pred, FiltrationDirection::Superlevel),
                          CubicalFiltration::build(common, FiltrationDirection::Superlevel));
    int essential_subs = 0;
    for (std::size_t i = 0; i < result.sub_diagram.pairs.size(); ++i) {
        if (!result.sub_diagram.pairs[i].essential()) continue;
        ++essential_subs;
        REQUIRE(result.ambient_match[i].has_value());
        const auto& a =
            result.ambient_diagram.pairs[static_cast<std::size_t>(*result.ambient_match[i])];
        CHECK(a.essential());
        CHECK(a.dim == result.sub_diagram.pairs[i].dim);
    }
    CHECK(essential_subs == 1); // a full grid complex has one component, no loops
}

} // TEST_SUITE
