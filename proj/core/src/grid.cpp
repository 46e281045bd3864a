#include "toposeg/grid.hpp"

#include <algorithm>
#include <random>

namespace toposeg {

namespace {

void check_finite(const std::vector<double>& values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v))
            throw ValidationError(std::string(what) + ": non-finite value");
}

void check_unit_range(const std::vector<double>& values) {
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw ValidationError("likelihood: value outside [0, 1]");
}

void check_bits(const std::vector<std::uint8_t>& values) {
    for (std::uint8_t v : values)
        if (v > 1)
            throw ValidationError("mask: value outside {0, 1}");
}

} // namespace

Image2D::Image2D(int width, int height, double fill) : Grid(width, height, fill) {
    if (!std::isfinite(fill))
        throw ValidationError("image: non-finite value");
}

Image2D::Image2D(int width, int height, std::vector<double> values)
    : Grid(width, height, std::move(values)) {
    check_finite(data(), "image");
}

Image2D::Image2D(RealGrid grid) : Image2D(grid.width(), grid.height(), std::move(grid.data())) {}

LikelihoodMap::LikelihoodMap(int width, int height, double fill) : Grid(width, height, fill) {
    if (!(fill >= 0.0 && fill <= 1.0))
        throw ValidationError("likelihood: value outside [0, 1]");
}

LikelihoodMap::LikelihoodMap(int width, int height, std::vector<double> values)
    : Grid(width, height, std::move(values)) {
    check_unit_range(data());
}

LikelihoodMap::LikelihoodMap(RealGrid grid)
    : LikelihoodMap(grid.width(), grid.height(), std::move(grid.data())) {}

BinaryMask::BinaryMask(int width, int height, std::uint8_t fill) : Grid(width, height, fill) {
    if (fill > 1)
        throw ValidationError("mask: value outside {0, 1}");
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> values)
    : Grid(width, height, std::move(values)) {
    check_bits(data());
}

BinaryMask binarize(const LikelihoodMap& map, double threshold) {
    BinaryMask out(map.width(), map.height());
    for (int r = 0; r < map.height(); ++r)
        for (int c = 0; c < map.width(); ++c)
            out.at(r, c) = map.at(r, c) >= threshold ? 1 : 0;
    return out;
}

LikelihoodMap to_likelihood(const BinaryMask& mask) {
    LikelihoodMap out(mask.width(), mask.height());
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c)
            out.at(r, c) = mask.at(r, c);
    return out;
}

Image2D to_image(const BinaryMask& mask) {
    Image2D out(mask.width(), mask.height());
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c)
            out.at(r, c) = mask.at(r, c);
    return out;
}

namespace {

LikelihoodMap crop(const LikelihoodMap& map, int row, int col, int size) {
    LikelihoodMap out(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            out.at(r, c) = map.at(row + r, col + c);
    return out;
}

// mt19937_64 output reduced by modulo: slightly biased but identical on
// every platform, which matters more here than uniformity of crop origins.
int bounded_draw(std::mt19937_64& rng, int upper_inclusive) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(upper_inclusive + 1));
}

} // namespace

std::vector<std::pair<PatchSpec, LikelihoodMap>>
extract_patches(const LikelihoodMap& map, int size, int count, std::uint64_t seed) {
    if (size <= 0 || size > map.width() || size > map.height())
        throw ValidationError("extract_patches: patch size exceeds image");
    if (count < 0)
        throw ValidationError("extract_patches: negative count");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<PatchSpec, LikelihoodMap>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int row = bounded_draw(rng, map.height() - size);
        int col = bounded_draw(rng, map.width() - size);
        out.emplace_back(PatchSpec{row, col, size, 0}, crop(map, row, col, size));
    }
    return out;
}

std::vector<std::pair<PatchSpec, LikelihoodMap>>
tile_patches(const LikelihoodMap& map, int size, int stride) {
    if (size <= 0 || size > map.width() || size > map.height())
        throw ValidationError("tile_patches: patch size exceeds image");
    if (stride <= 0)
        throw ValidationError("tile_patches: stride must be positive");
    std::vector<int> rows, cols;
    for (int r = 0;; r += stride) {
        if (r + size >= map.height()) { rows.push_back(map.height() - size); break; }
        rows.push_back(r);
    }
    for (int c = 0;; c += stride) {
        if (c + size >= map.width()) { cols.push_back(map.width() - size); break; }
        cols.push_back(c);
    }
    std::vector<std::pair<PatchSpec, LikelihoodMap>> out;
    out.reserve(rows.size() * cols.size());
    for (int r : rows)
        for (int c : cols)
            out.emplace_back(PatchSpec{r, c, size, stride}, crop(map, r, c, size));
    return out;
}

LikelihoodMap stitch_sliding_window(
    const std::vector<std::pair<PatchSpec, LikelihoodMap>>& patches,
    int width, int height) {
    RealGrid sum(width, height, 0.0);
    Grid<int> hits(width, height, 0);
    for (const auto& [spec, patch] : patches) {
        if (!patch.same_shape(spec.size, spec.size))
            throw ValidationError("stitch: patch shape does not match its spec");
        if (spec.row < 0 || spec.col < 0 ||
            spec.row + spec.size > height || spec.col + spec.size > width)
            throw ValidationError("stitch: patch outside canvas");
        for (int r = 0; r < spec.size; ++r)
            for (int c = 0; c < spec.size; ++c) {
                sum.at(spec.row + r, spec.col + c) += patch.at(r, c);
                hits.at(spec.row + r, spec.col + c) += 1;
            }
    }
    LikelihoodMap out(width, height);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            if (hits.at(r, c) == 0)
                throw ValidationError("stitch: uncovered pixel");
            out.at(r, c) = sum.at(r, c) / hits.at(r, c);
        }
    return out;
}

LikelihoodMap pad_frame(const LikelihoodMap& map, int pad, double value) {
    return LikelihoodMap(pad_frame(static_cast<const Grid<double>&>(map), pad, value));
}

BinaryMask pad_frame(const BinaryMask& mask, int pad, std::uint8_t value) {
    Grid<std::uint8_t> g = pad_frame(static_cast<const Grid<std::uint8_t>&>(mask), pad, value);
    return BinaryMask(g.width(), g.height(), std::move(g.data()));
}

} // namespace toposeg
