#pragma once

#include <vector>

#include "toposeg/persistence.hpp"

namespace toposeg::oracles {

// Flattened bar for cross-implementation comparison. Values are copies of
// input pixel values (never arithmetic results), so exact equality is the
// right comparison.
struct OracleBar {
    int dim = 0;
    double birth = 0.0;
    double death = 0.0; // +inf / -inf for essential bars
    int birth_row = 0;
    int birth_col = 0;
    int death_row = -1;
    int death_col = -1;
    friend bool operator==(const OracleBar&, const OracleBar&) = default;
};

// Reference persistence computation sharing only the documented conventions
// with the main engine: V-construction over the doubled grid, cell value =
// max over covered pixels, order (internal value, dim, linear cell id),
// critical vertex = lexicographically smallest attaining pixel,
// zero-persistence bars dropped. The reduction is a from-scratch
// set-per-column single pass with no optimizations.
std::vector<OracleBar> naive_persistence(const Grid<double>& image, FiltrationDirection direction);

// Engine output flattened into the same shape.
std::vector<OracleBar> to_bars(const PersistenceDiagram& diagram);

// Sorts by the full field tuple so equal multisets compare equal
// elementwise.
void canonical_sort(std::vector<OracleBar>& bars);

} // namespace toposeg::oracles
