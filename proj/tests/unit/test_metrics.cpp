#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <queue>
#include <random>
#include <vector>

#include "toposeg/fixtures.hpp"
#include "toposeg/grid.hpp"
#include "toposeg/metrics.hpp"

using namespace toposeg;

namespace {

BinaryMask random_mask(int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BinaryMask mask(size, size);
    for (auto& v : mask.data()) v = static_cast<std::uint8_t>(rng() & 1u);
    return mask;
}

BinaryMask horizontal_line(int size, int row, int c0, int c1) {
    BinaryMask mask(size, size, std::uint8_t{0});
    for (int c = c0; c <= c1; ++c) mask.at(row, c) = 1;
    return mask;
}

BinaryMask vertical_line(int size, int col, int r0, int r1) {
    BinaryMask mask(size, size, std::uint8_t{0});
    for (int r = r0; r <= r1; ++r) mask.at(r, col) = 1;
    return mask;
}

// Entropy-based expected VoI from the four joint pixel counts.
double voi_expected(std::int64_t n00, std::int64_t n01, std::int64_t n10, std::int64_t n11) {
    const double n = static_cast<double>(n00 + n01 + n10 + n11);
    auto h = [n](std::int64_t count) {
        if (count == 0) return 0.0;
        const double p = static_cast<double>(count) / n;
        return -p * std::log(p);
    };
    const double h_joint = h(n00) + h(n01) + h(n10) + h(n11);
    const double h_pred = h(n00 + n01) + h(n10 + n11); // pred bg/fg marginals
    const double h_gt = h(n00 + n10) + h(n01 + n11);
    return 2.0 * h_joint - h_pred - h_gt;
}

int count_components_8(const BinaryMask& mask) {
    Grid<int> seen(mask.width(), mask.height(), 0);
    int components = 0;
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c) {
            if (!mask.at(r, c) || seen.at(r, c)) continue;
            ++components;
            std::queue<std::pair<int, int>> frontier;
            frontier.emplace(r, c);
            seen.at(r, c) = 1;
            while (!frontier.empty()) {
                const auto [cr, cc] = frontier.front();
                frontier.pop();
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = cr + dr, nc = cc + dc;
                        if (nr < 0 || nc < 0 || nr >= mask.height() || nc >= mask.width()) continue;
                        if (!mask.at(nr, nc) || seen.at(nr, nc)) continue;
                        seen.at(nr, nc) = 1;
                        frontier.emplace(nr, nc);
                    }
            }
        }
    return components;
}

constexpr double kTol = 1e-12;

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("identical masks score perfectly") {
    const auto mask = horizontal_line(8, 3, 1, 6);
    const auto rep = compute_metrics(mask, mask);
    CHECK(rep.dice == 1.0);
    CHECK(rep.iou == 1.0);
    CHECK(rep.pa == 1.0);
    CHECK(rep.cl_dice == 1.0);
    CHECK(rep.voi == 0.0);
    CHECK(rep.betti_error_dim0 == 0);
    CHECK(rep.betti_error_dim1 == 0);
}

TEST_CASE("both-empty masks score one by convention") {
    const BinaryMask empty(8, 8, std::uint8_t{0});
    CHECK(dice(empty, empty) == 1.0);
    CHECK(iou(empty, empty) == 1.0);
    CHECK(pixel_accuracy(empty, empty) == 1.0);
    CHECK(cl_dice(empty, empty) == 1.0);
    CHECK(voi(empty, empty) == 0.0);
}

TEST_CASE("a lone false positive against an empty target") {
    BinaryMask pred(8, 8, std::uint8_t{0});
    pred.at(2, 5) = 1;
    const BinaryMask gt(8, 8, std::uint8_t{0});
    CHECK(dice(pred, gt) == 0.0);
    CHECK(iou(pred, gt) == 0.0);
    CHECK(pixel_accuracy(pred, gt) == doctest::Approx(63.0 / 64.0).epsilon(kTol));
    CHECK(cl_dice(pred, gt) == 0.0);
    // Against the trivial partition, VoI reduces to the prediction entropy.
    CHECK(voi(pred, gt) == doctest::Approx(voi_expected(63, 0, 1, 0)).epsilon(kTol));
}

TEST_CASE("shifted copies of a line") {
    const auto pred = horizontal_line(16, 3, 1, 6);
    const auto gt = horizontal_line(16, 3, 2, 7);
    CHECK(dice(pred, gt) == doctest::Approx(5.0 / 6.0).epsilon(kTol));
    CHECK(iou(pred, gt) == doctest::Approx(5.0 / 7.0).epsilon(kTol));
    CHECK(pixel_accuracy(pred, gt) == doctest::Approx(254.0 / 256.0).epsilon(kTol));
    // 1-pixel lines are their own skeletons, so clDice reduces to overlap.
    CHECK(cl_dice(pred, gt) == doctest::Approx(5.0 / 6.0).epsilon(kTol));
    CHECK(voi(pred, gt) == doctest::Approx(voi_expected(249, 1, 1, 5)).epsilon(kTol));
}

TEST_CASE("crossing lines share one pixel") {
    const auto pred = horizontal_line(8, 4, 1, 6);
    const auto gt = vertical_line(8, 4, 1, 6);
    CHECK(dice(pred, gt) == doctest::Approx(1.0 / 6.0).epsilon(kTol));
    CHECK(iou(pred, gt) == doctest::Approx(1.0 / 11.0).epsilon(kTol));
    CHECK(pixel_accuracy(pred, gt) == doctest::Approx(54.0 / 64.0).epsilon(kTol));
    CHECK(cl_dice(pred, gt) == doctest::Approx(1.0 / 6.0).epsilon(kTol));
    CHECK(voi(pred, gt) == doctest::Approx(voi_expected(53, 5, 5, 1)).epsilon(kTol));
}

TEST_CASE("an extra parallel line halves the precision but not the recall") {
    auto pred = horizontal_line(8, 2, 1, 6);
    for (int c = 1; c <= 6; ++c) pred.at(5, c) = 1;
    const auto gt = horizontal_line(8, 2, 1, 6);
    CHECK(dice(pred, gt) == doctest::Approx(2.0 / 3.0).epsilon(kTol));
    CHECK(iou(pred, gt) == doctest::Approx(1.0 / 2.0).epsilon(kTol));
    CHECK(pixel_accuracy(pred, gt) == doctest::Approx(58.0 / 64.0).epsilon(kTol));
    // Precision 1/2, sensitivity 1: harmonic mean 2/3.
    CHECK(cl_dice(pred, gt) == doctest::Approx(2.0 / 3.0).epsilon(kTol));
    CHECK(voi(pred, gt) == doctest::Approx(voi_expected(52, 0, 6, 6)).epsilon(kTol));
    const auto [e0, e1] = betti_error(pred, gt);
    CHECK(e0 == 1);
    CHECK(e1 == 0);
}

TEST_CASE("dice never falls below iou") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto a = random_mask(8, 2 * seed);
        const auto b = random_mask(8, 2 * seed + 1);
        const double d = dice(a, b);
        const double j = iou(a, b);
        CHECK(d >= j);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(j >= 0.0);
        CHECK(j <= 1.0);
    }
}

TEST_CASE("voi is a symmetric premetric, exactly") {
    CHECK(voi(random_mask(8, 1), random_mask(8, 1)) == 0.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto a = random_mask(8, 3 * seed);
        const auto b = random_mask(8, 3 * seed + 1);
        CHECK(voi(a, a) == 0.0);
        CHECK(voi(a, b) == voi(b, a)); // bit-exact, not approximate
        CHECK(voi(a, b) >= 0.0);
    }
}

TEST_CASE("skeletons are idempotent thin subsets preserving connectivity") {
    const BinaryMask fixtures[] = {
        gen_fixture(FixtureKind::Ring, 16, 0),
        gen_fixture(FixtureKind::Grid, 16, 0),
        gen_fixture(FixtureKind::RandomBlobs, 16, 3),
        gen_fixture(FixtureKind::RandomBlobs, 16, 9),
        gen_fixture(FixtureKind::BrokenLine, 16, 0),
    };
    for (const auto& mask : fixtures) {
        const auto skel = skeletonize(mask);
        CHECK(skeletonize(skel) == skel);
        for (int i = 0; i < mask.size(); ++i)
            if (skel.data()[static_cast<std::size_t>(i)])
                CHECK(mask.data()[static_cast<std::size_t>(i)]);
        CHECK(count_components_8(skel) == count_components_8(mask));
    }
}

TEST_CASE("cl_dice rewards centerline overlap on thick tubes") {
    // A 3-wide horizontal bar: its skeleton is a thin line, so a prediction
    // that shares the full centerline keeps a perfect sensitivity even when
    // it is thinner than the target.
    BinaryMask gt(12, 12, std::uint8_t{0});
    for (int r = 4; r <= 6; ++r)
        for (int c = 1; c <= 10; ++c) gt.at(r, c) = 1;
    const auto pred_thin = horizontal_line(12, 5, 1, 10);
    const double exact_tube = cl_dice(pred_thin, gt);
    CHECK(exact_tube == 1.0); // both skeletons stay inside the other side's mask

    // Displacing the thin prediction off the tube destroys both directions.
    const auto pred_off = horizontal_line(12, 9, 1, 10);
    CHECK(cl_dice(pred_off, gt) == 0.0);
    CHECK(cl_dice(pred_off, gt) < exact_tube);

    // One empty side scores zero.
    const BinaryMask empty(12, 12, std::uint8_t{0});
    CHECK(cl_dice(pred_thin, empty) == 0.0);
    CHECK(cl_dice(empty, gt) == 0.0);
}

TEST_CASE("betti error equals the component-count route") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto a = random_mask(10, seed + 400);
        const auto b = random_mask(10, seed + 900);
        const auto [e0, e1] = betti_error(a, b);
        const auto ba = component_betti(a);
        const auto bb = component_betti(b);
        CHECK(e0 == std::abs(ba.beta0 - bb.beta0));
        CHECK(e1 == std::abs(ba.beta1 - bb.beta1));
    }
    const auto ring = gen_fixture(FixtureKind::Ring, 16, 0);
    const auto betti = component_betti(ring);
    CHECK(betti.beta0 == 1);
    CHECK(betti.beta1 == 1);
}

TEST_CASE("compute_metrics wires every field") {
    const auto pred = gen_fixture(FixtureKind::BrokenRing, 16, 0);
    const auto gt = gen_fixture(FixtureKind::Ring, 16, 0);
    const auto rep = compute_metrics(pred, gt);
    CHECK(rep.dice == dice(pred, gt));
    CHECK(rep.iou == iou(pred, gt));
    CHECK(rep.pa == pixel_accuracy(pred, gt));
    CHECK(rep.cl_dice == cl_dice(pred, gt));
    CHECK(rep.voi == voi(pred, gt));
    const auto [e0, e1] = betti_error(pred, gt);
    CHECK(rep.betti_error_dim0 == e0);
    CHECK(rep.betti_error_dim1 == e1);
    CHECK(rep.betti_error_dim1 == 1); // the gap destroys the loop
}

} // TEST_SUITE
