#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "toposeg/cubical.hpp"
#include "toposeg/distance.hpp"
#include "toposeg/fixtures.hpp"
#include "toposeg/loss.hpp"
#include "toposeg/matching.hpp"
#include "toposeg/persistence.hpp"

using namespace toposeg;

namespace {

// Shuffled distinct levels: the worst case for reduction (no plateaus, every
// cell creates or kills something).
Grid<double> shuffled_levels(int size, std::uint64_t seed) {
    Grid<double> g(size, size);
    const double denom = static_cast<double>(size) * size + 1.0;
    for (int i = 0; i < g.size(); ++i)
        g.data()[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / denom;
    std::mt19937_64 rng(seed);
    std::shuffle(g.data().begin(), g.data().end(), rng);
    return g;
}

// A realistic likelihood: soft boundary around a blob mask plus bounded noise,
// strictly inside (0, 1).
LikelihoodMap noisy_likelihood(int size, std::uint64_t seed) {
    const auto mask = gen_fixture(FixtureKind::RandomBlobs, size, seed);
    const auto soft = sdf_soft_target(sdf(mask), 1.0);
    LikelihoodMap out(size, size);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < out.size(); ++i)
        out.data()[static_cast<std::size_t>(i)] =
            0.7 * soft.data()[static_cast<std::size_t>(i)] + 0.3 * uni(rng);
    return out;
}

PersistenceDiagram synthetic_diagram(int bars_per_dim, std::uint64_t seed) {
    PersistenceDiagram d;
    d.direction = FiltrationDirection::Sublevel;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int dim = 0; dim < 2; ++dim)
        for (int i = 0; i < bars_per_dim; ++i) {
            PersistencePair p;
            p.dim = dim;
            const double a = uni(rng), b = uni(rng);
            p.birth = std::min(a, b);
            p.death = std::max(a, b) + 1e-3;
            p.birth_cell = Cell{dim, 0, 0, p.birth, 0, 0};
            p.death_cell = Cell{dim + 1, 1, 1, p.death, 0, 0};
            d.pairs.push_back(p);
        }
    return d;
}

} // namespace

static void EdtSquared(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto mask = gen_fixture(FixtureKind::RandomBlobs, size, 7);
    for (auto _ : state) {
        auto field = edt_squared(mask, EdtRegion::Foreground);
        benchmark::DoNotOptimize(field);
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(EdtSquared)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void SignedDistance(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto mask = gen_fixture(FixtureKind::RandomBlobs, size, 7);
    for (auto _ : state) {
        auto field = sdf(mask);
        benchmark::DoNotOptimize(field);
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(SignedDistance)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void PersistenceClearing(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto img = shuffled_levels(size, 11);
    for (auto _ : state) {
        const auto filt = CubicalFiltration::build(img, FiltrationDirection::Superlevel);
        auto diagram = compute_persistence(filt, ReductionMode::Clearing);
        benchmark::DoNotOptimize(diagram);
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(PersistenceClearing)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void PersistenceNaive(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto img = shuffled_levels(size, 11);
    for (auto _ : state) {
        const auto filt = CubicalFiltration::build(img, FiltrationDirection::Superlevel);
        auto diagram = compute_persistence(filt, ReductionMode::Naive);
        benchmark::DoNotOptimize(diagram);
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(PersistenceNaive)->RangeMultiplier(2)->Range(8, 32)->Complexity();

static void WassersteinByBars(benchmark::State& state) {
    const int bars = static_cast<int>(state.range(0));
    const auto a = synthetic_diagram(bars, 3);
    const auto b = synthetic_diagram(bars, 4);
    for (auto _ : state) {
        auto result = wasserstein_matching(a, b, 2.0);
        benchmark::DoNotOptimize(result);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(WassersteinByBars)->RangeMultiplier(2)->Range(4, 128)->Complexity();

static void BettiMatchingBySize(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto pred = noisy_likelihood(size, 5);
    const auto target = to_likelihood(gen_fixture(FixtureKind::RandomBlobs, size, 6));
    for (auto _ : state) {
        auto result = betti_matching(pred, target);
        benchmark::DoNotOptimize(result);
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BettiMatchingBySize)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void CombinedLossWasserstein(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto pred = noisy_likelihood(size, 5);
    const auto gt = gen_fixture(FixtureKind::RandomBlobs, size, 6);
    LossConfig cfg;
    cfg.kind = LossKind::Wasserstein;
    for (auto _ : state) {
        auto lg = combined_loss(pred, gt, cfg);
        benchmark::DoNotOptimize(lg);
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(CombinedLossWasserstein)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void CombinedLossBetti(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto pred = noisy_likelihood(size, 5);
    const auto gt = gen_fixture(FixtureKind::RandomBlobs, size, 6);
    LossConfig cfg;
    cfg.kind = LossKind::Betti;
    for (auto _ : state) {
        auto lg = combined_loss(pred, gt, cfg);
        benchmark::DoNotOptimize(lg);
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(CombinedLossBetti)->RangeMultiplier(2)->Range(8, 64)->Complexity();

BENCHMARK_MAIN();
