#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "toposeg/grid.hpp"

namespace toposeg::oracles {

// A dim-0 superlevel bar identified by its creating pixel. Values are in
// the original (un-negated) scale; essential bars carry death = -inf.
struct SpatialBar {
    double birth = 0.0;
    double death = 0.0;
    int birth_row = 0;
    int birth_col = 0;
    bool essential = false;
    friend bool operator==(const SpatialBar&, const SpatialBar&) = default;
};

struct SpatialMatching {
    std::vector<SpatialBar> sub_bars;     // nonzero-persistence only
    std::vector<SpatialBar> ambient_bars; // nonzero-persistence only
    std::vector<std::optional<int>> ambient_match; // indexed like sub_bars
};

// Dim-0 induced matching between superlevel filtrations with
// sub <= ambient pointwise, computed purely by union-find sweeps: each
// ambient component tracks the oldest contained vertex in sub order; the
// merge that eliminates a vertex's image class is matched with the ambient
// bar dying at the same edge. A match is reported when the image bar is
// non-empty (strict) and both endpoint bars have nonzero persistence;
// the final surviving classes pair as the essential bars.
SpatialMatching spatial_dim0_matching(const Grid<double>& sub, const Grid<double>& ambient);

// Dim-0 bar correspondence between two superlevel filtrations through their
// pointwise minimum: bars correspond when matched to the same bar of the
// minimum image by the induced matchings above.
std::vector<std::pair<SpatialBar, SpatialBar>> spatial_betti_dim0(const Grid<double>& pred,
                                                                  const Grid<double>& target);

} // namespace toposeg::oracles
