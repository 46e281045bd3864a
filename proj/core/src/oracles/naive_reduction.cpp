#include "toposeg/oracles/naive_reduction.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>
#include <vector>

#include "toposeg/error.hpp"

namespace toposeg::oracles {

namespace {

// Self-contained doubled-grid complex: pixels sit at even/even coordinates,
// edges at mixed parity, squares at odd/odd. Works on internal values
// (negated for superlevel) like the engine, but shares no code with it.
struct RefComplex {
    int pw = 0, ph = 0; // pixel grid
    int cw = 0, ch = 0; // doubled grid
    std::vector<double> pix;

    explicit RefComplex(const Grid<double>& image, FiltrationDirection direction)
        : pw(image.width()), ph(image.height()), cw(2 * pw - 1), ch(2 * ph - 1),
          pix(static_cast<std::size_t>(pw) * ph) {
        const double sign = direction == FiltrationDirection::Superlevel ? -1.0 : 1.0;
        for (int r = 0; r < ph; ++r)
            for (int c = 0; c < pw; ++c)
                pix[static_cast<std::size_t>(r) * pw + c] = sign * image.at(r, c);
    }

    int dim_of(std::int64_t id) const {
        const int ar = static_cast<int>(id / cw), ac = static_cast<int>(id % cw);
        return (ar % 2) + (ac % 2);
    }

    void covered_pixels(std::int64_t id, int rows[2], int& nr, int cols[2], int& nc) const {
        const int ar = static_cast<int>(id / cw), ac = static_cast<int>(id % cw);
        if (ar % 2 == 0) { rows[0] = ar / 2; nr = 1; }
        else { rows[0] = (ar - 1) / 2; rows[1] = (ar + 1) / 2; nr = 2; }
        if (ac % 2 == 0) { cols[0] = ac / 2; nc = 1; }
        else { cols[0] = (ac - 1) / 2; cols[1] = (ac + 1) / 2; nc = 2; }
    }

    double value_of(std::int64_t id) const {
        int rows[2], cols[2], nr, nc;
        covered_pixels(id, rows, nr, cols, nc);
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j)
                best = std::max(best, pix[static_cast<std::size_t>(rows[i]) * pw + cols[j]]);
        return best;
    }

    // Lexicographically smallest attaining pixel.
    void critical_vertex(std::int64_t id, int& row, int& col) const {
        int rows[2], cols[2], nr, nc;
        covered_pixels(id, rows, nr, cols, nc);
        const double v = value_of(id);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j)
                if (pix[static_cast<std::size_t>(rows[i]) * pw + cols[j]] == v) {
                    row = rows[i];
                    col = cols[j];
                    return;
                }
        throw std::logic_error("no attaining pixel"); // unreachable
    }

    std::vector<std::int64_t> boundary_ids(std::int64_t id) const {
        const int ar = static_cast<int>(id / cw), ac = static_cast<int>(id % cw);
        std::vector<std::int64_t> faces;
        const int dim = (ar % 2) + (ac % 2);
        if (dim == 1) {
            if (ar % 2 == 1) {
                faces.push_back(static_cast<std::int64_t>(ar - 1) * cw + ac);
                faces.push_back(static_cast<std::int64_t>(ar + 1) * cw + ac);
            } else {
                faces.push_back(static_cast<std::int64_t>(ar) * cw + ac - 1);
                faces.push_back(static_cast<std::int64_t>(ar) * cw + ac + 1);
            }
        } else if (dim == 2) {
            faces.push_back(static_cast<std::int64_t>(ar - 1) * cw + ac);
            faces.push_back(static_cast<std::int64_t>(ar + 1) * cw + ac);
            faces.push_back(static_cast<std::int64_t>(ar) * cw + ac - 1);
            faces.push_back(static_cast<std::int64_t>(ar) * cw + ac + 1);
        }
        return faces;
    }
};

} // namespace

std::vector<OracleBar> naive_persistence(const Grid<double>& image, FiltrationDirection direction) {
    const RefComplex cx(image, direction);
    const std::int64_t n_cells = static_cast<std::int64_t>(cx.cw) * cx.ch;

    std::vector<std::int64_t> order(n_cells);
    for (std::int64_t id = 0; id < n_cells; ++id) order[id] = id;
    std::vector<double> value(n_cells);
    for (std::int64_t id = 0; id < n_cells; ++id) value[id] = cx.value_of(id);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return std::make_tuple(value[a], cx.dim_of(a), a) <
               std::make_tuple(value[b], cx.dim_of(b), b);
    });
    std::vector<std::int64_t> rank(n_cells);
    for (std::int64_t pos = 0; pos < n_cells; ++pos) rank[order[pos]] = pos;

    // Plain left-to-right reduction, one set per column, no shortcuts.
    std::vector<std::set<std::int64_t>> columns(n_cells);
    std::vector<std::int64_t> pivot_owner(n_cells, -1); // pivot row -> column
    std::vector<std::pair<std::int64_t, std::int64_t>> deaths; // (birth pos, death pos)
    for (std::int64_t pos = 0; pos < n_cells; ++pos) {
        std::set<std::int64_t>& col = columns[pos];
        for (std::int64_t face : cx.boundary_ids(order[pos])) col.insert(rank[face]);
        while (!col.empty()) {
            const std::int64_t pivot = *col.rbegin();
            const std::int64_t other = pivot_owner[pivot];
            if (other < 0) {
                pivot_owner[pivot] = pos;
                deaths.emplace_back(pivot, pos);
                break;
            }
            for (std::int64_t entry : columns[other]) {
                auto [it, inserted] = col.insert(entry);
                if (!inserted) col.erase(it);
            }
        }
    }

    const bool super = direction == FiltrationDirection::Superlevel;
    const double sign = super ? -1.0 : 1.0;
    const double essential_death =
        super ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();

    std::vector<OracleBar> bars;
    for (auto [birth_pos, death_pos] : deaths) {
        const std::int64_t birth_id = order[birth_pos], death_id = order[death_pos];
        if (value[birth_id] == value[death_id]) continue; // zero persistence
        OracleBar bar;
        bar.dim = cx.dim_of(birth_id);
        bar.birth = sign * value[birth_id];
        bar.death = sign * value[death_id];
        cx.critical_vertex(birth_id, bar.birth_row, bar.birth_col);
        cx.critical_vertex(death_id, bar.death_row, bar.death_col);
        bars.push_back(bar);
    }
    for (std::int64_t pos = 0; pos < n_cells; ++pos) {
        if (!columns[pos].empty()) continue;        // negative column: kills, never born
        if (pivot_owner[pos] >= 0) continue;        // finite bar, reported above
        const std::int64_t id = order[pos];
        OracleBar bar;
        bar.dim = cx.dim_of(id);
        bar.birth = sign * value[id];
        bar.death = essential_death;
        cx.critical_vertex(id, bar.birth_row, bar.birth_col);
        bars.push_back(bar);
    }
    canonical_sort(bars);
    return bars;
}

std::vector<OracleBar> to_bars(const PersistenceDiagram& diagram) {
    std::vector<OracleBar> bars;
    bars.reserve(diagram.pairs.size());
    for (const PersistencePair& pair : diagram.pairs) {
        OracleBar bar;
        bar.dim = pair.dim;
        bar.birth = pair.birth;
        bar.death = pair.death;
        bar.birth_row = pair.birth_row();
        bar.birth_col = pair.birth_col();
        bar.death_row = pair.death_row();
        bar.death_col = pair.death_col();
        bars.push_back(bar);
    }
    canonical_sort(bars);
    return bars;
}

void canonical_sort(std::vector<OracleBar>& bars) {
    std::sort(bars.begin(), bars.end(), [](const OracleBar& a, const OracleBar& b) {
        return std::make_tuple(a.dim, a.birth, a.death, a.birth_row, a.birth_col, a.death_row,
                               a.death_col) < std::make_tuple(b.dim, b.birth, b.death, b.birth_row,
                                                              b.birth_col, b.death_row, b.death_col);
    });
}

} // namespace toposeg::oracles
