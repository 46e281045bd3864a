#pragma once

#include "toposeg/grid.hpp"
#include "toposeg/matching.hpp"

namespace toposeg {

enum class LossKind { Wasserstein, Betti };

struct LossConfig {
    double alpha = 0.9;      // combined-loss weight on the Dice term
    double p = 2.0;          // matching exponent
    int padding_width = 2;   // foreground frame added before topological terms
    bool use_dim0 = true;
    bool use_dim1 = true;
    LossKind kind = LossKind::Wasserstein;
};

// Scalar loss plus its gradient over the unpadded likelihood map. The
// topological terms compute on padded grids; gradient contributions landing
// on padding (possible only for bars created by the frame itself) are
// discarded, with their L1 mass recorded for inspection.
struct LossGrad {
    double value = 0.0;
    RealGrid grad;
    double dice_term = 0.0;
    double topo_term = 0.0;
    int n_matched = 0;
    int n_diagonal = 0;
    double discarded_pad_grad_l1 = 0.0;
};

// Squared-form Wasserstein loss over superlevel diagrams of the padded
// inputs: sum of ||c - c'||^2 over the optimal matching (diagonal-matched
// points pay the squared distance to their projection). Gradients are
// subgradients routed to the critical vertices of the pred diagram.
LossGrad wasserstein_loss_grad(const LikelihoodMap& pred, const BinaryMask& gt,
                               const LossConfig& cfg);

// Betti-matching loss: 2 * ||q - mu(q)||^2 summed over pred bars, where
// mu is the induced matching through min(P, G); unmatched pred bars pay
// 2 * the squared distance to their diagonal projection. Matched essential
// bars contribute on the birth coordinate only.
LossGrad betti_loss_grad(const LikelihoodMap& pred, const BinaryMask& gt, const LossConfig& cfg);

// alpha * soft Dice + (1 - alpha) * topological term of cfg.kind. The Dice
// term sees the unpadded inputs. alpha = 1 skips diagram computation
// entirely, observable through diagram_computation_count().
LossGrad combined_loss(const LikelihoodMap& pred, const BinaryMask& gt, const LossConfig& cfg);

void validate(const LossConfig& cfg);

} // namespace toposeg
