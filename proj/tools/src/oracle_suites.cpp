#include "oracle_suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <vector>

#include "toposeg/cubical.hpp"
#include "toposeg/distance.hpp"
#include "toposeg/error.hpp"
#include "toposeg/grid.hpp"
#include "toposeg/loss.hpp"
#include "toposeg/matching.hpp"
#include "toposeg/metrics.hpp"
#include "toposeg/oracles/brute_force.hpp"
#include "toposeg/oracles/finite_difference.hpp"
#include "toposeg/oracles/naive_reduction.hpp"
#include "toposeg/oracles/spatial_matching.hpp"
#include "toposeg/oracles/sweep.hpp"
#include "toposeg/persistence.hpp"
#include "toposeg/refine.hpp"

namespace toposeg::cli {
namespace {

using toposeg::oracles::canonical_sort;
using toposeg::oracles::to_bars;

struct CheckReporter {
    const char* suite;
    bool all_passed = true;

    // One line per named check; the first failing case wins the detail slot.
    void report(const std::string& check, bool ok, int cases, const std::string& detail = "") {
        if (ok) {
            std::printf("PASS %s %s cases=%d\n", suite, check.c_str(), cases);
        } else {
            std::printf("FAIL %s %s %s\n", suite, check.c_str(), detail.c_str());
            all_passed = false;
        }
    }
};

Grid<double> random_distinct_grid(int size, std::mt19937_64& rng) {
    std::vector<double> values(static_cast<std::size_t>(size) * size);
    std::iota(values.begin(), values.end(), 1.0);
    std::shuffle(values.begin(), values.end(), rng);
    return Grid<double>(size, size, std::move(values));
}

LikelihoodMap random_distinct_likelihood(int size, std::mt19937_64& rng) {
    const double n = static_cast<double>(size) * size;
    std::vector<double> values(static_cast<std::size_t>(size) * size);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = (static_cast<double>(i) + 1.0) / (n + 1.0);
    std::shuffle(values.begin(), values.end(), rng);
    return LikelihoodMap(RealGrid(size, size, std::move(values)));
}

BinaryMask random_mask(int size, std::mt19937_64& rng) {
    BinaryMask mask(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) mask.at(r, c) = static_cast<std::uint8_t>(rng() & 1u);
    return mask;
}

bool persistence_suite(int n, int size, std::mt19937_64& rng) {
    CheckReporter rep{"persistence"};
    bool reductions_ok = true, curves_ok = true, euler_ok = true, events_ok = true, csv_ok = true;
    std::string detail;
    auto note = [&](bool& flag, int i, const char* what) {
        if (flag && detail.empty()) detail = "case=" + std::to_string(i) + " " + what;
        flag = false;
    };

    for (int i = 0; i < n; ++i) {
        const auto img = random_distinct_grid(size, rng);
        for (auto dir : {FiltrationDirection::Sublevel, FiltrationDirection::Superlevel}) {
            const auto filt = CubicalFiltration::build(img, dir);
            const auto engine = compute_persistence(filt, ReductionMode::Clearing);
            const auto naive_mode = compute_persistence(filt, ReductionMode::Naive);
            auto a = to_bars(engine);
            auto b = to_bars(naive_mode);
            auto c = toposeg::oracles::naive_persistence(img, dir);
            canonical_sort(a);
            canonical_sort(b);
            canonical_sort(c);
            if (a != b) note(reductions_ok, i, "clearing != naive mode");
            if (a != c) note(reductions_ok, i, "engine != reference reduction");

            const auto curve = toposeg::oracles::sweep_betti_curve(img, dir);
            for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
                const double t = curve.thresholds[k];
                if (betti_at(engine, t) != curve.betti[k]) note(curves_ok, i, "betti curve mismatch");
                const auto bv = curve.betti[k];
                if (bv.beta0 - bv.beta1 != filt.euler_characteristic(t))
                    note(euler_ok, i, "euler characteristic mismatch");
            }
            // Off-grid thresholds between consecutive values must agree too.
            for (std::size_t k = 0; k + 1 < curve.thresholds.size(); ++k) {
                const double t = 0.5 * (curve.thresholds[k] + curve.thresholds[k + 1]);
                if (betti_at(engine, t) != toposeg::oracles::sweep_betti_at(img, dir, t))
                    note(curves_ok, i, "betti at midpoint mismatch");
            }

            const auto events = toposeg::oracles::sweep_dim0_events(img, dir);
            const auto dim0 = engine.indices_of_dim(0);
            if (static_cast<std::int64_t>(dim0.size()) != events.merge_events + events.essential_components)
                note(events_ok, i, "dim-0 bar count != merges + essentials");

            const auto csv = diagram_to_csv(engine);
            const auto re = diagram_from_csv(csv);
            if (diagram_to_csv(re) != csv) note(csv_ok, i, "csv round-trip not byte-identical");
            auto d = to_bars(re);
            canonical_sort(d);
            if (a != d) note(csv_ok, i, "csv round-trip changed bars");
        }
    }
    rep.report("reduction-agreement", reductions_ok, n, detail);
    rep.report("betti-curves", curves_ok, n, detail);
    rep.report("euler-consistency", euler_ok, n, detail);
    rep.report("dim0-event-count", events_ok, n, detail);
    rep.report("csv-round-trip", csv_ok, n, detail);
    return rep.all_passed;
}

bool edt_suite(int n, int size, std::mt19937_64& rng) {
    CheckReporter rep{"edt"};
    bool edt_ok = true, sdf_ok = true, nest_ok = true, tau0_ok = true;
    std::string detail;
    auto note = [&](bool& flag, int i, const char* what) {
        if (flag && detail.empty()) detail = "case=" + std::to_string(i) + " " + what;
        flag = false;
    };

    for (int i = 0; i < n; ++i) {
        const auto mask = random_mask(size, rng);
        for (auto region : {EdtRegion::Foreground, EdtRegion::Background}) {
            if (edt_squared(mask, region) != toposeg::oracles::brute_force_edt_squared(mask, region))
                note(edt_ok, i, "squared edt != all-pairs scan");
        }

        BinaryMask complement(mask.width(), mask.height());
        for (int r = 0; r < mask.height(); ++r)
            for (int c = 0; c < mask.width(); ++c) complement.at(r, c) = mask.at(r, c) ? 0 : 1;
        const auto field = sdf(mask);
        const auto neg = sdf(complement);
        for (int r = 0; r < mask.height(); ++r)
            for (int c = 0; c < mask.width(); ++c)
                if (field.at(r, c) != -neg.at(r, c)) note(sdf_ok, i, "sdf(mask) != -sdf(complement)");

        // Lower thresholds only grow the region (inclusive >= rule).
        const double taus[] = {3.0, 1.0, 0.0, -1.5, -4.0};
        BinaryMask prev = threshold_mask(field, taus[0]);
        for (std::size_t k = 1; k < std::size(taus); ++k) {
            const BinaryMask cur = threshold_mask(field, taus[k]);
            for (int r = 0; r < mask.height(); ++r)
                for (int c = 0; c < mask.width(); ++c)
                    if (prev.at(r, c) && !cur.at(r, c)) note(nest_ok, i, "threshold sets not nested");
            prev = cur;
        }
        if (threshold_mask(field, 0.0) != mask) note(tau0_ok, i, "tau=0 does not recover the mask");
    }
    rep.report("squared-edt-exact", edt_ok, n, detail);
    rep.report("sdf-negation-symmetry", sdf_ok, n, detail);
    rep.report("threshold-nesting", nest_ok, n, detail);
    rep.report("tau0-identity", tau0_ok, n, detail);
    return rep.all_passed;
}

// Diagram with fabricated finite bars; only dim/birth/death matter for
// matching, the cells are placeholders.
PersistenceDiagram synthetic_diagram(std::mt19937_64& rng, int max_per_dim) {
    PersistenceDiagram d;
    d.direction = FiltrationDirection::Superlevel;
    for (int dim = 0; dim <= 1; ++dim) {
        const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(max_per_dim + 1));
        for (int j = 0; j < k; ++j) {
            PersistencePair pair;
            pair.dim = dim;
            pair.death = static_cast<double>(rng() % 900) / 100.0;
            pair.birth = pair.death + static_cast<double>(1 + rng() % 300) / 100.0;
            pair.birth_cell = Cell{};
            pair.death_cell = Cell{};
            d.pairs.push_back(pair);
        }
    }
    return d;
}

bool wasserstein_suite(int n, std::mt19937_64& rng) {
    CheckReporter rep{"wasserstein"};
    bool opt_ok = true, self_ok = true;
    std::string detail;
    auto note = [&](bool& flag, int i, const char* what) {
        if (flag && detail.empty()) detail = "case=" + std::to_string(i) + " " + what;
        flag = false;
    };

    for (int i = 0; i < n; ++i) {
        const auto a = synthetic_diagram(rng, 3);
        const auto b = synthetic_diagram(rng, 3);
        for (double p : {1.0, 2.0}) {
            const auto engine = wasserstein_matching(a, b, p);
            const double brute = toposeg::oracles::brute_force_wasserstein(a, b, p);
            if (std::abs(engine.distance - brute) > 1e-9) note(opt_ok, i, "distance not optimal");
        }
        if (wasserstein_matching(a, a, 2.0).distance != 0.0) note(self_ok, i, "W(A,A) != 0");
    }

    // Lone point against the empty diagram: cost is the diagonal projection.
    PersistenceDiagram one, empty;
    one.direction = empty.direction = FiltrationDirection::Sublevel;
    PersistencePair pair;
    pair.dim = 0;
    pair.birth = 0.0;
    pair.death = 1.0;
    pair.death_cell = Cell{};
    one.pairs.push_back(pair);
    const bool single_ok = std::abs(wasserstein_matching(one, empty, 2.0).distance - std::sqrt(0.5)) <= 1e-12;

    rep.report("optimal-vs-enumeration", opt_ok, n, detail);
    rep.report("self-distance-zero", self_ok, n, detail);
    rep.report("single-point-diagonal", single_ok, 1, "expected sqrt(0.5)");
    return rep.all_passed;
}

bool matching_suite(int n, int size, std::mt19937_64& rng) {
    CheckReporter rep{"matching"};
    bool image_ok = true, compose_ok = true, identity_ok = true;
    std::string detail;
    auto note = [&](bool& flag, int i, const char* what) {
        if (flag && detail.empty()) detail = "case=" + std::to_string(i) + " " + what;
        flag = false;
    };

    for (int i = 0; i < n; ++i) {
        const auto pred = random_distinct_likelihood(size, rng);
        const auto target = random_distinct_likelihood(size, rng);
        RealGrid cmin(size, size);
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) cmin.at(r, c) = std::min(pred.at(r, c), target.at(r, c));

        // Dim-0 image persistence against the union-find sweep, for both
        // inclusions C -> P and C -> G.
        for (const auto* ambient : {&pred, &target}) {
            const auto amb_filt = CubicalFiltration::build(*ambient, FiltrationDirection::Superlevel);
            const auto sub_filt =
                CubicalFiltration::build(LikelihoodMap(cmin), FiltrationDirection::Superlevel);
            const auto engine = image_persistence(amb_filt, sub_filt);
            const auto oracle = toposeg::oracles::spatial_dim0_matching(cmin, RealGrid(*ambient));

            const auto sub0 = engine.sub_diagram.indices_of_dim(0);
            if (sub0.size() != oracle.sub_bars.size()) {
                note(image_ok, i, "dim-0 sub bar count mismatch");
                continue;
            }
            for (std::size_t k = 0; k < sub0.size(); ++k) {
                const auto& bar = engine.sub_diagram.pairs[sub0[k]];
                const auto& ref = oracle.sub_bars[k];
                if (bar.birth != ref.birth || bar.birth_row() != ref.birth_row ||
                    bar.birth_col() != ref.birth_col || bar.essential() != ref.essential)
                    note(image_ok, i, "dim-0 sub bar mismatch");
                const auto& engine_match = engine.ambient_match[sub0[k]];
                const auto& oracle_match = oracle.ambient_match[k];
                if (engine_match.has_value() != oracle_match.has_value()) {
                    note(image_ok, i, "matched flag mismatch");
                } else if (engine_match) {
                    const auto& amb_bar = engine.ambient_diagram.pairs[*engine_match];
                    const auto& ref_bar = oracle.ambient_bars[*oracle_match];
                    if (amb_bar.birth != ref_bar.birth || amb_bar.birth_row() != ref_bar.birth_row ||
                        amb_bar.birth_col() != ref_bar.birth_col)
                        note(image_ok, i, "matched partner mismatch");
                }
            }
        }

        // Composed pred<->target correspondence against the oracle's.
        const auto result = betti_matching(pred, target);
        const auto oracle_pairs = toposeg::oracles::spatial_betti_dim0(RealGrid(pred), RealGrid(target));
        std::vector<std::array<int, 4>> engine_set, oracle_set;
        for (const auto& [pi, ti] : result.matching.matched) {
            const auto& pb = result.pred_diagram.pairs[pi];
            const auto& tb = result.target_diagram.pairs[ti];
            if (pb.dim != 0) continue;
            engine_set.push_back({pb.birth_row(), pb.birth_col(), tb.birth_row(), tb.birth_col()});
        }
        for (const auto& [pb, tb] : oracle_pairs)
            oracle_set.push_back({pb.birth_row, pb.birth_col, tb.birth_row, tb.birth_col});
        std::sort(engine_set.begin(), engine_set.end());
        std::sort(oracle_set.begin(), oracle_set.end());
        if (engine_set != oracle_set) note(compose_ok, i, "composed dim-0 correspondence mismatch");

        // Self-matching leaves nothing on the diagonal.
        const auto self = betti_matching(pred, pred);
        if (!self.matching.pred_to_diagonal.empty() || !self.matching.target_to_diagonal.empty() ||
            self.matching.matched.size() != self.pred_diagram.pairs.size())
            note(identity_ok, i, "self matching not the identity");
    }
    rep.report("dim0-image-persistence", image_ok, n, detail);
    rep.report("dim0-composition", compose_ok, n, detail);
    rep.report("self-identity", identity_ok, n, detail);
    return rep.all_passed;
}

bool gradient_suite(int n, int size, std::mt19937_64& rng) {
    CheckReporter rep{"gradient"};
    bool wm_ok = true, bm_ok = true, dice_ok = true, adapter_ok = true;
    std::string detail;
    auto note = [&](bool& flag, int i, const char* what) {
        if (flag && detail.empty()) detail = "case=" + std::to_string(i) + " " + what;
        flag = false;
    };
    const double step = 1e-4;
    const double rel_tol = 1e-3;

    for (int i = 0; i < n; ++i) {
        const auto pred = random_distinct_likelihood(size, rng);
        const auto gt = random_mask(size, rng);

        for (auto kind : {LossKind::Wasserstein, LossKind::Betti}) {
            LossConfig cfg;
            cfg.kind = kind;
            auto loss_fn = [&](const RealGrid& x) {
                return kind == LossKind::Wasserstein
                           ? wasserstein_loss_grad(LikelihoodMap(x), gt, cfg).value
                           : betti_loss_grad(LikelihoodMap(x), gt, cfg).value;
            };
            const auto analytic = kind == LossKind::Wasserstein ? wasserstein_loss_grad(pred, gt, cfg)
                                                                : betti_loss_grad(pred, gt, cfg);
            const auto fd = toposeg::oracles::finite_difference_gradient(loss_fn, RealGrid(pred), step);
            bool& flag = kind == LossKind::Wasserstein ? wm_ok : bm_ok;
            for (int r = 0; r < size; ++r)
                for (int c = 0; c < size; ++c) {
                    const double a = analytic.grad.at(r, c);
                    if (a == 0.0) continue;
                    if (std::abs(fd.at(r, c) - a) > rel_tol * std::abs(a))
                        note(flag, i, "loss gradient != finite difference");
                }
        }

        const auto dice_grad = soft_dice_loss(pred, gt);
        const auto dice_fd = toposeg::oracles::finite_difference_gradient(
            [&](const RealGrid& x) { return soft_dice_loss(LikelihoodMap(x), gt).value; }, RealGrid(pred),
            step);
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) {
                const double a = dice_grad.grad.at(r, c);
                if (a == 0.0) continue;
                if (std::abs(dice_fd.at(r, c) - a) > rel_tol * std::abs(a))
                    note(dice_ok, i, "soft dice gradient != finite difference");
            }

        // Adapter partials, checked through the mean activation so scale and
        // bias are scalar derivatives.
        const RealGrid field = RealGrid(sdf(gt));
        const AdapterParams params{1.0 + static_cast<double>(rng() % 100) / 100.0,
                                   static_cast<double>(rng() % 100) / 100.0 - 0.5};
        RealGrid d_scale(size, size), d_bias(size, size);
        adapter_partials(field, params, nullptr, &d_scale, &d_bias);
        auto mean_activation = [&](const AdapterParams& q) {
            const auto out = adapter_forward(field, q);
            double sum = 0.0;
            for (int r = 0; r < size; ++r)
                for (int c = 0; c < size; ++c) sum += out.at(r, c);
            return sum / (static_cast<double>(size) * size);
        };
        double mean_ds = 0.0, mean_db = 0.0;
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) {
                mean_ds += d_scale.at(r, c);
                mean_db += d_bias.at(r, c);
            }
        mean_ds /= static_cast<double>(size) * size;
        mean_db /= static_cast<double>(size) * size;
        const double h = 1e-6;
        const double fd_ds = (mean_activation({params.scale + h, params.bias}) -
                              mean_activation({params.scale - h, params.bias})) /
                             (2 * h);
        const double fd_db = (mean_activation({params.scale, params.bias + h}) -
                              mean_activation({params.scale, params.bias - h})) /
                             (2 * h);
        if (std::abs(fd_ds - mean_ds) > 1e-5 * std::max(1.0, std::abs(mean_ds)))
            note(adapter_ok, i, "scale partial != finite difference");
        if (std::abs(fd_db - mean_db) > 1e-5 * std::max(1.0, std::abs(mean_db)))
            note(adapter_ok, i, "bias partial != finite difference");
    }
    rep.report("wasserstein-loss-grad", wm_ok, n, detail);
    rep.report("betti-loss-grad", bm_ok, n, detail);
    rep.report("soft-dice-grad", dice_ok, n, detail);
    rep.report("adapter-partials", adapter_ok, n, detail);
    return rep.all_passed;
}

} // namespace

bool run_oracle_suite(const std::string& suite, int n, int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (suite == "persistence") return persistence_suite(n, size, rng);
    if (suite == "edt") return edt_suite(n, size, rng);
    if (suite == "wasserstein") return wasserstein_suite(n, rng);
    if (suite == "matching") return matching_suite(n, size, rng);
    if (suite == "gradient") return gradient_suite(n, size, rng);
    if (suite == "all") {
        bool ok = persistence_suite(n, size, rng);
        ok &= edt_suite(n, std::max(size, 8), rng);
        ok &= wasserstein_suite(n, rng);
        ok &= matching_suite(n, std::max(size, 8), rng);
        ok &= gradient_suite(std::min(n, 5), std::max(size, 8), rng);
        return ok;
    }
    throw ValidationError("unknown oracle suite: " + suite +
                          " (expected persistence|edt|wasserstein|matching|gradient|all)");
}

} // namespace toposeg::cli
