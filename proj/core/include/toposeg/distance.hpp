#pragma once

#include <cstdint>
#include <limits>

#include "toposeg/grid.hpp"

namespace toposeg {

// Signed distance to the mask boundary: positive inside the foreground,
// negative outside. Distances are measured between pixel centers, so no
// pixel of a non-uniform mask ever carries the value 0; the continuous zero
// level set lies between pixel centers.
class DistanceField : public Grid<double> {
public:
    DistanceField() = default;
    DistanceField(int width, int height, double fill = 0.0);
    DistanceField(int width, int height, std::vector<double> values);
    explicit DistanceField(RealGrid grid);
};

enum class EdtRegion {
    Foreground, // distance to the nearest foreground pixel
    Background, // distance to the nearest background pixel
};

// Squared distance reported when the target region is empty.
inline constexpr std::int64_t kEdtUnreachable = std::numeric_limits<std::int64_t>::max();

// Exact squared Euclidean distance from each pixel center to the nearest
// pixel center of the target region, via the separable lower-envelope scan.
// Squared distances are integers, so results are exact, never approximate.
Grid<std::int64_t> edt_squared(const BinaryMask& mask, EdtRegion region);

// sqrt of edt_squared; +infinity where the target region is empty.
RealGrid edt(const BinaryMask& mask, EdtRegion region);

// EDT to background minus EDT to foreground. Uniform masks have one empty
// region; they use the +-(width+height) convention, a magnitude larger than
// any achievable pixel distance.
DistanceField sdf(const BinaryMask& mask);

// Pixels with field value >= tau (inclusive, matching binarize). At tau = 0
// this recovers the original mask exactly: foreground values are >= 1,
// background <= -1 under the pixel-center convention.
BinaryMask threshold_mask(const DistanceField& field, double tau);

// 0.5*(tanh(scale*field) + 1): smooth monotone squash of the signed field
// into [0,1], 0.5 at field value 0. Warm-start target for likelihood grids.
LikelihoodMap sdf_soft_target(const DistanceField& field, double scale);

} // namespace toposeg
