#pragma once

#include <cstdint>

#include "toposeg/distance.hpp"
#include "toposeg/grid.hpp"
#include "toposeg/persistence.hpp"

namespace toposeg::oracles {

// All-pairs scan: for each pixel, the minimum squared center distance to
// any pixel of the target region. O(n * m), exact integers.
Grid<std::int64_t> brute_force_edt_squared(const BinaryMask& mask, EdtRegion region);

// Optimal diagram distance by exhaustive enumeration of all partial
// matchings (per dimension, finite bars only, unmatched bars pay the
// distance to their diagonal projection). Throws ValidationError when a
// dimension holds more than max_points bars. Returns (total cost)^(1/p).
double brute_force_wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                               double p = 2.0, int max_points = 6);

} // namespace toposeg::oracles
