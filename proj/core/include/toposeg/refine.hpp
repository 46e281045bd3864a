#pragma once

#include <cstdint>
#include <vector>

#include "toposeg/distance.hpp"
#include "toposeg/grid.hpp"
#include "toposeg/loss.hpp"

namespace toposeg {

// Learned scalar transform standing in for the adapter network: the field is
// shifted by bias, scaled, and squashed into a likelihood.
struct AdapterParams {
    double scale = 1.0;
    double bias = 0.0;
};

enum class WarmStart { Sdf, Cold };

struct RefineConfig {
    double learning_rate = 0.1;
    int stage1_iters = 200;
    int stage2_iters = 100;
    LossConfig loss;
    std::uint64_t seed = 0;
    WarmStart warm_start = WarmStart::Sdf;
};

// One record per executed iteration, evaluated on the state entering the
// iteration. Stage-1 records carry the MSE against the SDF target as loss;
// stage-2 records carry the combined loss. dice and the Betti errors always
// compare the binarized adapter output against the ground truth.
struct TraceRecord {
    int iter = 0;
    double loss = 0.0;
    double dice = 0.0;
    std::int64_t betti0_err = 0;
    std::int64_t betti1_err = 0;
};

struct RefineTrace {
    std::vector<TraceRecord> records;
    RealGrid field;
    AdapterParams params;
    LikelihoodMap likelihood; // adapter output for the final state
};

// Raised by the stage-2 divergence guard.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// value(x) = 0.5 * (tanh(scale * (field(x) - bias)) + 1); strictly inside
// (0,1), monotone in the field; binarizing at 0.5 equals thresholding the
// field at bias.
LikelihoodMap adapter_forward(const RealGrid& field, const AdapterParams& params);

// Per-pixel partial derivatives of adapter_forward. Any output may be null.
void adapter_partials(const RealGrid& field, const AdapterParams& params, RealGrid* d_field,
                      RealGrid* d_scale, RealGrid* d_bias);

// Gradient descent on the per-pixel quadratic sum((x - t)^2) with per-pixel
// gradient 2(x - t): contracts for any learning rate in (0, 1) and lands
// exactly on the target at 0.5. mse_trace, when given, records the mean
// squared error entering each iteration.
RealGrid stage1_pretrain(const RealGrid& init_field, const DistanceField& target,
                         const RefineConfig& cfg, std::vector<double>* mse_trace = nullptr);

// Joint gradient descent on (field, adapter params) under
// combined_loss(adapter_forward(field, params), gt). Adapter parameter
// gradients are averaged over pixels so the scalar step size is independent
// of image area; scale is projected to stay positive. Aborts with
// DivergenceError if the loss exceeds 10x its initial value.
RefineTrace stage2_finetune(RealGrid field, AdapterParams params, const BinaryMask& gt,
                            const RefineConfig& cfg);

// Stage 1 against sdf(noisy_mask) (or an all-zero field for cold starts)
// followed by stage 2 against gt; returns the concatenated trace with
// continuous iteration numbering.
RefineTrace two_stage_run(const BinaryMask& noisy_mask, const BinaryMask& gt,
                          const RefineConfig& cfg);

struct ComparisonReport {
    RefineTrace warm;
    RefineTrace cold;
    // First stage-2 record with Betti error (0,0), counted from the start of
    // stage 2; -1 when never reached.
    std::int64_t warm_iters_to_zero_betti = -1;
    std::int64_t cold_iters_to_zero_betti = -1;
};

ComparisonReport two_stage_comparison(const BinaryMask& noisy_mask, const BinaryMask& gt,
                                      const RefineConfig& cfg);

} // namespace toposeg
