#pragma once

#include <utility>
#include <vector>

#include "toposeg/persistence.hpp"

namespace toposeg {

// Correspondence between two diagrams. Indices refer to positions in the
// respective PersistenceDiagram::pairs lists; every index appears in at most
// one list. Points only ever match within their homology dimension.
struct DiagramMatching {
    std::vector<std::pair<int, int>> matched; // (pred index, target index)
    std::vector<int> pred_to_diagonal;
    std::vector<int> target_to_diagonal;
};

struct WassersteinResult {
    DiagramMatching matching;
    double distance = 0.0; // (sum of matched costs)^(1/p)
};

// Optimal diagram matching under ground cost ||c - c'||^p (Euclidean norm),
// where any point may instead pay the cost to its orthogonal diagonal
// projection. Solved exactly per dimension with a Hungarian assignment on
// the augmented (points + projections) matrix. Essential pairs are excluded:
// they appear in no list and contribute no cost.
WassersteinResult wasserstein_matching(const PersistenceDiagram& pred,
                                       const PersistenceDiagram& target, double p = 2.0);

// Spatially meaningful matching induced by inclusions into the comparison
// image C = min(P, G): a pred bar corresponds to a target bar when both are
// matched to the same bar of C under image persistence of the superlevel
// filtrations. Bars without a partner are reported diagonal-matched.
struct BettiMatchingResult {
    DiagramMatching matching;
    PersistenceDiagram pred_diagram;
    PersistenceDiagram target_diagram;
};

BettiMatchingResult betti_matching(const LikelihoodMap& pred, const LikelihoodMap& target);
BettiMatchingResult betti_matching(const LikelihoodMap& pred, const BinaryMask& target);

// Exact solver for the rectangular assignment problem (rows <= cols),
// O(rows^2 * cols). Returns col index per row and writes the optimal total
// cost. Exposed for the matching tests.
std::vector<int> solve_assignment(int rows, int cols, const std::vector<double>& cost,
                                  double& total_cost);

} // namespace toposeg
