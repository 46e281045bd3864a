#pragma once

#include <cstdint>
#include <vector>

#include "toposeg/cubical.hpp"
#include "toposeg/persistence.hpp"

namespace toposeg::oracles {

// Betti numbers of the thresholded pixel set ({v >= t} for superlevel,
// {v <= t} for sublevel) computed directly: components by flood fill,
// beta1 = beta0 - chi with chi = pixels - adjacencies + filled 2x2 blocks.
// No filtration machinery involved.
BettiVector sweep_betti_at(const Grid<double>& image, FiltrationDirection direction, double t);
BettiVector sweep_betti_at(const BinaryMask& mask, FiltrationDirection direction, double t);

// The full curve at every distinct pixel value, ascending.
struct BettiCurve {
    std::vector<double> thresholds;
    std::vector<BettiVector> betti; // aligned with thresholds
};
BettiCurve sweep_betti_curve(const Grid<double>& image, FiltrationDirection direction);

// Component bookkeeping from a union-find pass in filtration order.
// merge_events counts merges where the dying component outlives its birth
// value (zero-length components are skipped, mirroring the diagram
// convention of dropping zero-persistence bars), so
//   dim-0 diagram size == merge_events + essential_components.
struct Dim0Events {
    std::int64_t merge_events = 0;
    std::int64_t essential_components = 0;
};
Dim0Events sweep_dim0_events(const Grid<double>& image, FiltrationDirection direction);

} // namespace toposeg::oracles
