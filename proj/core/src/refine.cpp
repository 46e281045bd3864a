#include "toposeg/refine.hpp"

#include <cmath>
#include <cstdlib>

#include "toposeg/metrics.hpp"

namespace toposeg {

namespace {

constexpr double kMinScale = 1e-8;
constexpr int kMaxIters = 100000;

void check_config(const RefineConfig& cfg) {
    if (!(cfg.learning_rate > 0))
        throw ValidationError("refine config: learning rate must be positive");
    if (cfg.stage1_iters < 0 || cfg.stage1_iters > kMaxIters ||
        cfg.stage2_iters < 0 || cfg.stage2_iters > kMaxIters)
        throw ValidationError("refine config: iteration count outside [0, 1e5]");
    validate(cfg.loss);
}

TraceRecord make_record(int iter, double loss, const LikelihoodMap& pred, const BinaryMask& gt) {
    TraceRecord rec;
    rec.iter = iter;
    rec.loss = loss;
    const BinaryMask hard = binarize(pred, 0.5);
    rec.dice = dice(hard, gt);
    // Betti errors via the union-find route: traces must not trigger diagram
    // computation, or pure-Dice runs would no longer be diagram-free.
    const BettiVector bp = component_betti(hard);
    const BettiVector bg = component_betti(gt);
    rec.betti0_err = std::abs(bp.beta0 - bg.beta0);
    rec.betti1_err = std::abs(bp.beta1 - bg.beta1);
    return rec;
}

} // namespace

LikelihoodMap adapter_forward(const RealGrid& field, const AdapterParams& params) {
    if (!(params.scale > 0))
        throw ValidationError("adapter: scale must be positive");
    LikelihoodMap out(field.width(), field.height());
    for (int r = 0; r < field.height(); ++r)
        for (int c = 0; c < field.width(); ++c)
            out.at(r, c) = 0.5 * (std::tanh(params.scale * (field.at(r, c) - params.bias)) + 1.0);
    return out;
}

void adapter_partials(const RealGrid& field, const AdapterParams& params, RealGrid* d_field,
                      RealGrid* d_scale, RealGrid* d_bias) {
    if (!(params.scale > 0))
        throw ValidationError("adapter: scale must be positive");
    auto prep = [&](RealGrid* g) {
        if (g) *g = RealGrid(field.width(), field.height(), 0.0);
    };
    prep(d_field);
    prep(d_scale);
    prep(d_bias);
    for (int r = 0; r < field.height(); ++r)
        for (int c = 0; c < field.width(); ++c) {
            const double centered = field.at(r, c) - params.bias;
            const double t = std::tanh(params.scale * centered);
            const double sech2 = 1.0 - t * t;
            if (d_field) d_field->at(r, c) = 0.5 * params.scale * sech2;
            if (d_scale) d_scale->at(r, c) = 0.5 * centered * sech2;
            if (d_bias) d_bias->at(r, c) = -0.5 * params.scale * sech2;
        }
}

RealGrid stage1_pretrain(const RealGrid& init_field, const DistanceField& target,
                         const RefineConfig& cfg, std::vector<double>* mse_trace) {
    check_config(cfg);
    if (!init_field.same_shape(target))
        throw ValidationError("stage1: grid shapes differ");
    RealGrid field = init_field;
    const double n = static_cast<double>(field.size());
    for (int it = 0; it < cfg.stage1_iters; ++it) {
        double sq = 0.0;
        for (int r = 0; r < field.height(); ++r)
            for (int c = 0; c < field.width(); ++c) {
                const double diff = field.at(r, c) - target.at(r, c);
                sq += diff * diff;
                field.at(r, c) -= cfg.learning_rate * 2.0 * diff;
            }
        if (mse_trace) mse_trace->push_back(sq / n);
    }
    return field;
}

RefineTrace stage2_finetune(RealGrid field, AdapterParams params, const BinaryMask& gt,
                            const RefineConfig& cfg) {
    check_config(cfg);
    if (!field.same_shape(gt))
        throw ValidationError("stage2: grid shapes differ");
    if (!(params.scale > 0))
        throw ValidationError("stage2: initial scale must be positive");

    const double n = static_cast<double>(field.size());
    RefineTrace trace;
    double initial_loss = 0.0;
    RealGrid d_field, d_scale, d_bias;
    for (int it = 0; it < cfg.stage2_iters; ++it) {
        const LikelihoodMap pred = adapter_forward(field, params);
        const LossGrad lg = combined_loss(pred, gt, cfg.loss);
        trace.records.push_back(make_record(it, lg.value, pred, gt));
        if (it == 0) initial_loss = lg.value;
        else if (lg.value > 10.0 * initial_loss)
            throw DivergenceError("stage2: loss exceeded 10x its initial value");

        adapter_partials(field, params, &d_field, &d_scale, &d_bias);
        double gs = 0.0, gb = 0.0;
        for (int r = 0; r < field.height(); ++r)
            for (int c = 0; c < field.width(); ++c) {
                const double g = lg.grad.at(r, c);
                field.at(r, c) -= cfg.learning_rate * g * d_field.at(r, c);
                gs += g * d_scale.at(r, c);
                gb += g * d_bias.at(r, c);
            }
        params.scale = std::max(params.scale - cfg.learning_rate * gs / n, kMinScale);
        params.bias -= cfg.learning_rate * gb / n;
    }
    trace.field = std::move(field);
    trace.params = params;
    trace.likelihood = adapter_forward(trace.field, params);
    return trace;
}

RefineTrace two_stage_run(const BinaryMask& noisy_mask, const BinaryMask& gt,
                          const RefineConfig& cfg) {
    check_config(cfg);
    if (!noisy_mask.same_shape(gt))
        throw ValidationError("two_stage_run: grid shapes differ");

    RealGrid field(noisy_mask.width(), noisy_mask.height(), 0.0);
    std::vector<TraceRecord> stage1_records;
    if (cfg.warm_start == WarmStart::Sdf) {
        const DistanceField target = sdf(noisy_mask);
        // Re-run the descent step by step so the trace can record the
        // adapter output against gt at each iteration.
        const AdapterParams init_params;
        RefineConfig one = cfg;
        one.stage1_iters = 1;
        const double n = static_cast<double>(field.size());
        for (int it = 0; it < cfg.stage1_iters; ++it) {
            double sq = 0.0;
            for (int r = 0; r < field.height(); ++r)
                for (int c = 0; c < field.width(); ++c) {
                    const double diff = field.at(r, c) - target.at(r, c);
                    sq += diff * diff;
                }
            stage1_records.push_back(
                make_record(it, sq / n, adapter_forward(field, init_params), gt));
            field = stage1_pretrain(field, target, one);
        }
    }

    RefineTrace trace = stage2_finetune(std::move(field), AdapterParams{}, gt, cfg);
    for (TraceRecord& rec : trace.records) rec.iter += static_cast<int>(stage1_records.size());
    trace.records.insert(trace.records.begin(), stage1_records.begin(), stage1_records.end());
    return trace;
}

ComparisonReport two_stage_comparison(const BinaryMask& noisy_mask, const BinaryMask& gt,
                                      const RefineConfig& cfg) {
    ComparisonReport rep;
    RefineConfig warm_cfg = cfg;
    warm_cfg.warm_start = WarmStart::Sdf;
    RefineConfig cold_cfg = cfg;
    cold_cfg.warm_start = WarmStart::Cold;
    rep.warm = two_stage_run(noisy_mask, gt, warm_cfg);
    rep.cold = two_stage_run(noisy_mask, gt, cold_cfg);

    auto settle = [](const RefineTrace& trace, int stage2_start) {
        for (std::size_t i = stage2_start; i < trace.records.size(); ++i)
            if (trace.records[i].betti0_err == 0 && trace.records[i].betti1_err == 0)
                return static_cast<std::int64_t>(i) - stage2_start;
        return std::int64_t{-1};
    };
    rep.warm_iters_to_zero_betti = settle(rep.warm, cfg.stage1_iters);
    rep.cold_iters_to_zero_betti = settle(rep.cold, 0);
    return rep;
}

} // namespace toposeg
