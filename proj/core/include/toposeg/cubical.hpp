#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "toposeg/grid.hpp"

namespace toposeg {

enum class FiltrationDirection { Sublevel, Superlevel };

// One cube of the complex. anchor is the cell's coordinate in the doubled
// grid (vertices at even/even, edges at mixed parity, squares at odd/odd).
// filtration_value is in the original image scale for both directions.
// critical_vertex is the pixel whose value the cell inherits, ties broken
// toward the lexicographically smallest (row, col).
struct Cell {
    int dim = 0;
    int anchor_row = 0;
    int anchor_col = 0;
    double filtration_value = 0.0;
    int critical_row = 0;
    int critical_col = 0;
};

// Full cubical complex over a pixel grid (V-construction: pixels are
// vertices, edges join 4-neighbors, squares fill 2x2 blocks), with cells
// sorted into a total filtration order. Superlevel filtrations negate values
// internally and run as sublevel; all values exposed here are un-negated.
class CubicalFiltration {
public:
    static CubicalFiltration build(const Grid<double>& image, FiltrationDirection direction);
    static CubicalFiltration build(const LikelihoodMap& map, FiltrationDirection direction);

    int pixel_width() const { return width_; }
    int pixel_height() const { return height_; }
    int cell_grid_width() const { return 2 * width_ - 1; }
    int cell_grid_height() const { return 2 * height_ - 1; }
    FiltrationDirection direction() const { return direction_; }

    // Cells in filtration order; position is the index into this order.
    std::int64_t cell_count() const { return static_cast<std::int64_t>(order_.size()); }
    Cell cell_at(std::int64_t position) const;
    int dim_at(std::int64_t position) const;

    // Internal (direction-normalized, ascending) value of the cell; equal
    // ordering of internal values defines the sublevel inclusion structure.
    double internal_value_at(std::int64_t position) const { return internal_value(order_[position]); }

    // Boundary faces of the cell at `position`, as positions. Vertices
    // return an empty span; edges two entries; squares four.
    int boundary(std::int64_t position, std::array<std::int64_t, 4>& faces) const;

    // Stable identity of a cell independent of filtration order: its linear
    // index anchor_row * cell_grid_width + anchor_col in the doubled grid.
    std::int64_t cell_id(std::int64_t position) const { return order_[position]; }
    std::int64_t position_of(std::int64_t cell_id) const { return rank_[cell_id]; }

    // Euler characteristic of the complex at threshold t: cells with value
    // <= t for sublevel, >= t for superlevel.
    std::int64_t euler_characteristic(double t) const;

    // Pointwise check that this filtration's sublevel sets (in the internal
    // ordering) contain the other's, i.e. other is included in this at every
    // threshold. Used as the image-persistence precondition.
    bool dominates(const CubicalFiltration& sub) const;

private:
    double internal_value(std::int64_t cell_id) const { return values_[cell_id]; }
    void vertices_of(std::int64_t cell_id, std::array<int, 8>& pix, int& count) const;

    int width_ = 0, height_ = 0;
    FiltrationDirection direction_ = FiltrationDirection::Sublevel;
    std::vector<double> pixels_;          // internal (possibly negated) pixel values
    std::vector<double> values_;          // cell id -> internal cell value
    std::vector<std::int64_t> order_;     // position -> cell id
    std::vector<std::int64_t> rank_;      // cell id -> position
};

} // namespace toposeg
