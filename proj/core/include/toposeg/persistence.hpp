#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toposeg/cubical.hpp"

namespace toposeg {

// One bar of the diagram. For sublevel filtrations birth <= death and
// essential pairs carry death = +inf; superlevel diagrams are reported in
// the un-negated original scale, so birth >= death and essential pairs carry
// death = -inf. Zero-persistence pairs never appear in diagrams.
struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = 0.0;
    Cell birth_cell;
    std::optional<Cell> death_cell; // empty for essential pairs

    int birth_row() const { return birth_cell.critical_row; }
    int birth_col() const { return birth_cell.critical_col; }
    int death_row() const { return death_cell ? death_cell->critical_row : -1; }
    int death_col() const { return death_cell ? death_cell->critical_col : -1; }
    bool essential() const { return !death_cell.has_value(); }
};

struct PersistenceDiagram {
    FiltrationDirection direction = FiltrationDirection::Sublevel;
    std::vector<PersistencePair> pairs;

    std::vector<int> indices_of_dim(int dim) const;
};

struct BettiVector {
    std::int64_t beta0 = 0;
    std::int64_t beta1 = 0;
    friend bool operator==(const BettiVector&, const BettiVector&) = default;
};

enum class ReductionMode {
    Clearing, // process dims top-down, skip columns cleared by higher pivots
    Naive,    // single left-to-right pass, no shortcuts
};

// Boundary-matrix reduction over Z_2. Both modes produce identical diagrams;
// Naive exists as an in-engine cross-check, independent reference
// implementations live in the oracle library. Pairs are sorted by
// (dim, birth position); ties cannot occur because positions are unique.
PersistenceDiagram compute_persistence(const CubicalFiltration& filt,
                                       ReductionMode mode = ReductionMode::Clearing);

// Number of dim-d bars alive at threshold t: birth <= t < death for
// sublevel diagrams, birth >= t > death for superlevel ones.
BettiVector betti_at(const PersistenceDiagram& diagram, double t);

// Result of the inclusion-induced matching between a sub filtration and an
// ambient one. For each bar of the sub diagram, ambient_match holds the
// index of its matched ambient bar or nothing. A sub bar is matched when the
// bar of its class in the image of the inclusion map is non-empty and the
// ambient bar it selects is itself non-trivial; the assignment is injective.
struct ImagePersistence {
    PersistenceDiagram sub_diagram;
    PersistenceDiagram ambient_diagram;
    std::vector<std::optional<int>> ambient_match; // indexed like sub_diagram.pairs
};

// Computes the matching by reducing the boundary matrix with columns taken
// in ambient filtration order while pivot rows are compared in sub
// filtration order. Requires pointwise domination (sub included in ambient
// at every internal threshold) and equal directions.
ImagePersistence image_persistence(const CubicalFiltration& ambient, const CubicalFiltration& sub);

// CSV with header dim,birth,death,birth_row,birth_col,death_row,death_col.
// Values use shortest round-trip formatting; essential deaths print as inf
// (sublevel) or -inf (superlevel); essential critical rows/cols are -1.
// to_csv . from_csv . to_csv is byte-identical.
std::string diagram_to_csv(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_csv(const std::string& text);

// Counts every boundary-matrix reduction performed by this module since
// process start. Lets tests observe that diagram computation is skipped
// entirely, e.g. for pure-Dice loss configurations.
std::uint64_t diagram_computation_count();

} // namespace toposeg
