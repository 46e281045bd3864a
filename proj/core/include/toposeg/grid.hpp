#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "toposeg/error.hpp"

namespace toposeg {

// Row-major 2D grid. Row 0 is the top row of the image, (row, col) indexing
// throughout. Operations on grids are pure: they return new grids and never
// mutate their inputs, so sharing across threads is safe.
template <typename T>
class Grid {
public:
    Grid() = default;

    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        check_shape(width, height);
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    Grid(int width, int height, std::vector<T> values)
        : width_(width), height_(height), data_(std::move(values)) {
        check_shape(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw ValidationError("grid: value count does not match width*height");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t size() const { return static_cast<std::int64_t>(width_) * height_; }
    bool empty() const { return data_.empty(); }

    T at(int row, int col) const { return data_[index(row, col)]; }
    T& at(int row, int col) { return data_[index(row, col)]; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool same_shape(int w, int h) const { return width_ == w && height_ == h; }
    template <typename U>
    bool same_shape(const Grid<U>& other) const {
        return same_shape(other.width(), other.height());
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    static void check_shape(int width, int height) {
        if (width <= 0 || height <= 0)
            throw ValidationError("grid: dimensions must be positive");
        if (static_cast<std::int64_t>(width) * height > kMaxPixels)
            throw ValidationError("grid: dimension overflow");
    }

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * width_ + col;
    }

    static constexpr std::int64_t kMaxPixels = std::int64_t{1} << 28;

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using RealGrid = Grid<double>;

// Raw grayscale raster; values are finite but otherwise unconstrained
// (8-bit files load as 0..255).
class Image2D : public Grid<double> {
public:
    Image2D() = default;
    Image2D(int width, int height, double fill = 0.0);
    Image2D(int width, int height, std::vector<double> values);
    explicit Image2D(RealGrid grid);
};

// Per-pixel foreground probability, every value in [0, 1].
class LikelihoodMap : public Grid<double> {
public:
    LikelihoodMap() = default;
    LikelihoodMap(int width, int height, double fill = 0.0);
    LikelihoodMap(int width, int height, std::vector<double> values);
    explicit LikelihoodMap(RealGrid grid);
};

// Hard segmentation, every value in {0, 1}.
class BinaryMask : public Grid<std::uint8_t> {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, std::uint8_t fill = 0);
    BinaryMask(int width, int height, std::vector<std::uint8_t> values);
};

// Square patch anchored at (row, col) in the source grid. stride records the
// sliding-window step that produced the patch (0 for random crops).
struct PatchSpec {
    int row = 0;
    int col = 0;
    int size = 0;
    int stride = 0;
};

BinaryMask binarize(const LikelihoodMap& map, double threshold);
LikelihoodMap to_likelihood(const BinaryMask& mask);
Image2D to_image(const BinaryMask& mask);

// count random square crops, fully inside the image, reproducible for a
// given seed independent of platform.
std::vector<std::pair<PatchSpec, LikelihoodMap>>
extract_patches(const LikelihoodMap& map, int size, int count, std::uint64_t seed);

// Sliding-window tiling in row-major scan order. The last window in each
// direction is shifted left/up so the image is fully covered.
std::vector<std::pair<PatchSpec, LikelihoodMap>>
tile_patches(const LikelihoodMap& map, int size, int stride);

// Reassembles patches onto a width x height canvas, averaging overlaps.
// Every output pixel must be covered by at least one patch.
LikelihoodMap stitch_sliding_window(
    const std::vector<std::pair<PatchSpec, LikelihoodMap>>& patches,
    int width, int height);

template <typename T>
Grid<T> pad_frame(const Grid<T>& grid, int pad, T value) {
    if (pad < 0)
        throw ValidationError("pad_frame: negative padding");
    Grid<T> out(grid.width() + 2 * pad, grid.height() + 2 * pad, value);
    for (int r = 0; r < grid.height(); ++r)
        for (int c = 0; c < grid.width(); ++c)
            out.at(r + pad, c + pad) = grid.at(r, c);
    return out;
}

LikelihoodMap pad_frame(const LikelihoodMap& map, int pad, double value);
BinaryMask pad_frame(const BinaryMask& mask, int pad, std::uint8_t value);

} // namespace toposeg
