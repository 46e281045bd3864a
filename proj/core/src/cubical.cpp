#include "toposeg/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toposeg {

namespace {

int cell_dim_from_anchor(std::int64_t cell_id, int cw) {
    const int r = static_cast<int>(cell_id / cw);
    const int c = static_cast<int>(cell_id % cw);
    return (r & 1) + (c & 1);
}

} // namespace

CubicalFiltration CubicalFiltration::build(const Grid<double>& image, FiltrationDirection direction) {
    CubicalFiltration f;
    f.width_ = image.width();
    f.height_ = image.height();
    f.direction_ = direction;
    f.pixels_.resize(static_cast<std::size_t>(image.size()));
    const double sign = direction == FiltrationDirection::Sublevel ? 1.0 : -1.0;
    for (int r = 0; r < f.height_; ++r)
        for (int c = 0; c < f.width_; ++c) {
            const double v = image.at(r, c);
            if (!std::isfinite(v))
                throw ValidationError("filtration: non-finite pixel value");
            f.pixels_[static_cast<std::size_t>(r) * f.width_ + c] = sign * v;
        }

    const int cw = f.cell_grid_width();
    const int ch = f.cell_grid_height();
    const std::int64_t n = static_cast<std::int64_t>(cw) * ch;
    f.values_.resize(n);
    {
        std::array<int, 8> pix;
        int count = 0;
        for (std::int64_t id = 0; id < n; ++id) {
            f.vertices_of(id, pix, count);
            double best = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < count; ++i)
                best = std::max(best, f.pixels_[static_cast<std::size_t>(pix[2 * i]) * f.width_ + pix[2 * i + 1]]);
            f.values_[id] = best;
        }
    }
    f.order_.resize(n);
    for (std::int64_t i = 0; i < n; ++i) f.order_[i] = i;

    // Total filtration order: (internal value, dim, anchor row, anchor col).
    // Faces share the max of a subset of the cell's vertices, so they never
    // sort after the cell (equal value implies smaller dim).
    std::sort(f.order_.begin(), f.order_.end(), [&](std::int64_t a, std::int64_t b) {
        const double va = f.internal_value(a), vb = f.internal_value(b);
        if (va != vb) return va < vb;
        const int da = cell_dim_from_anchor(a, cw), db = cell_dim_from_anchor(b, cw);
        if (da != db) return da < db;
        return a < b; // linear id order == (anchor row, anchor col) order
    });

    f.rank_.resize(n);
    for (std::int64_t pos = 0; pos < n; ++pos) f.rank_[f.order_[pos]] = pos;
    return f;
}

CubicalFiltration CubicalFiltration::build(const LikelihoodMap& map, FiltrationDirection direction) {
    return build(static_cast<const Grid<double>&>(map), direction);
}

void CubicalFiltration::vertices_of(std::int64_t cell_id, std::array<int, 8>& pix, int& count) const {
    const int cw = cell_grid_width();
    const int r = static_cast<int>(cell_id / cw);
    const int c = static_cast<int>(cell_id % cw);
    count = 0;
    // Pixel coordinates in row-major (row, col) pairs; order is already
    // lexicographic, which the critical-vertex tie-break relies on.
    for (int dr = -(r & 1); dr <= (r & 1); dr += 2) {
        for (int dc = -(c & 1); dc <= (c & 1); dc += 2) {
            pix[count++] = (r + dr) / 2;
            pix[count++] = (c + dc) / 2;
            if ((c & 1) == 0) break;
        }
        if ((r & 1) == 0) break;
    }
    count /= 2;
}

Cell CubicalFiltration::cell_at(std::int64_t position) const {
    const std::int64_t id = order_[position];
    const int cw = cell_grid_width();
    Cell cell;
    cell.anchor_row = static_cast<int>(id / cw);
    cell.anchor_col = static_cast<int>(id % cw);
    cell.dim = (cell.anchor_row & 1) + (cell.anchor_col & 1);

    std::array<int, 8> pix;
    int count = 0;
    vertices_of(id, pix, count);
    double best = -std::numeric_limits<double>::infinity();
    int br = 0, bc = 0;
    for (int i = 0; i < count; ++i) {
        const double v = pixels_[static_cast<std::size_t>(pix[2 * i]) * width_ + pix[2 * i + 1]];
        if (v > best) {
            best = v;
            br = pix[2 * i];
            bc = pix[2 * i + 1];
        }
    }
    cell.critical_row = br;
    cell.critical_col = bc;
    cell.filtration_value = direction_ == FiltrationDirection::Sublevel ? best : -best;
    return cell;
}

int CubicalFiltration::dim_at(std::int64_t position) const {
    return cell_dim_from_anchor(order_[position], cell_grid_width());
}

int CubicalFiltration::boundary(std::int64_t position, std::array<std::int64_t, 4>& faces) const {
    const int cw = cell_grid_width();
    const std::int64_t id = order_[position];
    const int r = static_cast<int>(id / cw);
    const int c = static_cast<int>(id % cw);
    int count = 0;
    if ((r & 1) && (c & 1)) {
        faces[count++] = rank_[id - cw];
        faces[count++] = rank_[id + cw];
        faces[count++] = rank_[id - 1];
        faces[count++] = rank_[id + 1];
    } else if (r & 1) {
        faces[count++] = rank_[id - cw];
        faces[count++] = rank_[id + cw];
    } else if (c & 1) {
        faces[count++] = rank_[id - 1];
        faces[count++] = rank_[id + 1];
    }
    return count;
}

std::int64_t CubicalFiltration::euler_characteristic(double t) const {
    const double internal_t = direction_ == FiltrationDirection::Sublevel ? t : -t;
    std::int64_t chi = 0;
    const std::int64_t n = cell_count();
    const int cw = cell_grid_width();
    for (std::int64_t id = 0; id < n; ++id) {
        if (internal_value(id) > internal_t) continue;
        chi += cell_dim_from_anchor(id, cw) == 1 ? -1 : 1;
    }
    return chi;
}

bool CubicalFiltration::dominates(const CubicalFiltration& sub) const {
    if (width_ != sub.width_ || height_ != sub.height_ || direction_ != sub.direction_)
        return false;
    // Cell values are maxima over vertices, so pixel-level domination of the
    // internal values implies cell-level domination.
    for (std::size_t i = 0; i < pixels_.size(); ++i)
        if (sub.pixels_[i] < pixels_[i]) return false;
    return true;
}

} // namespace toposeg
