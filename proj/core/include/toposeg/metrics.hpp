#pragma once

#include <cstdint>
#include <utility>

#include "toposeg/grid.hpp"
#include "toposeg/loss.hpp"
#include "toposeg/persistence.hpp"

namespace toposeg {

struct MetricReport {
    double dice = 0.0;
    double iou = 0.0;
    double pa = 0.0;
    double cl_dice = 0.0;
    double voi = 0.0;
    std::int64_t betti_error_dim0 = 0;
    std::int64_t betti_error_dim1 = 0;
};

// Overlap metrics; both-empty pairs score 1 by convention.
double dice(const BinaryMask& pred, const BinaryMask& gt);
double iou(const BinaryMask& pred, const BinaryMask& gt);
double pixel_accuracy(const BinaryMask& pred, const BinaryMask& gt);

// 1 - (2*sum(p*g) + eps) / (sum(p) + sum(g) + eps) with eps = 1, plus its
// analytic per-pixel gradient.
LossGrad soft_dice_loss(const LikelihoodMap& pred, const BinaryMask& gt);

// Zhang-Suen two-subiteration thinning to a 1-pixel-wide skeleton.
// Idempotent; the skeleton is a subset of the mask and preserves the
// 8-connected component count.
BinaryMask skeletonize(const BinaryMask& mask);

// Harmonic mean of topology precision |S_P & V_L| / |S_P| and topology
// sensitivity |S_L & V_P| / |S_L| over skeletons S and masks V. Both
// skeletons empty -> 1; exactly one empty -> 0.
double cl_dice(const BinaryMask& pred, const BinaryMask& gt);

// Variation of information H(A) + H(B) - 2I(A,B) of the binary pixel-label
// partitions, natural-log entropies, 0*log(0) = 0.
double voi(const BinaryMask& pred, const BinaryMask& gt);

// (|beta0(P) - beta0(G)|, |beta1(P) - beta1(G)|), Betti numbers taken from
// superlevel persistence diagrams at threshold 1.
std::pair<std::int64_t, std::int64_t> betti_error(const BinaryMask& pred, const BinaryMask& gt);

// Betti numbers of the mask's foreground complex by union-find component
// count and the Euler formula beta1 = beta0 - chi. Agrees with the diagram
// route but never touches the persistence machinery, so iteration traces can
// record topology without triggering diagram computation.
BettiVector component_betti(const BinaryMask& mask);

MetricReport compute_metrics(const BinaryMask& pred, const BinaryMask& gt);

} // namespace toposeg
