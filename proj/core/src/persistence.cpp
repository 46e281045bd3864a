#include "toposeg/persistence.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace toposeg {

namespace {

std::atomic<std::uint64_t> g_reduction_count{0};

[[noreturn]] void internal_fail(const char* what) {
    throw std::logic_error(std::string("persistence internal invariant violated: ") + what);
}

void internal_check(bool ok, const char* what) {
    if (!ok) internal_fail(what);
}

// Z_2 column addition: symmetric difference of sorted index vectors.
void add_column(std::vector<std::int64_t>& dst, const std::vector<std::int64_t>& src) {
    std::vector<std::int64_t> merged;
    merged.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() && j < src.size()) {
        if (dst[i] < src[j]) merged.push_back(dst[i++]);
        else if (src[j] < dst[i]) merged.push_back(src[j++]);
        else { ++i; ++j; }
    }
    merged.insert(merged.end(), dst.begin() + i, dst.end());
    merged.insert(merged.end(), src.begin() + j, src.end());
    dst = std::move(merged);
}

struct Reduction {
    // death position -> birth position for negative columns; -1 otherwise.
    std::vector<std::int64_t> birth_of;
    // row position -> owning (negative) column position; -1 if never a pivot.
    std::vector<std::int64_t> pivot_owner;
};

// Reduces the columns listed in `schedule` (each given as a position in the
// filtration) against each other in schedule order.
Reduction reduce_columns(const CubicalFiltration& filt, const std::vector<std::int64_t>& schedule,
                         std::vector<char>* skip) {
    const std::int64_t n = filt.cell_count();
    Reduction red;
    red.birth_of.assign(n, -1);
    red.pivot_owner.assign(n, -1);
    std::vector<std::vector<std::int64_t>> stored(n);

    std::array<std::int64_t, 4> faces;
    std::vector<std::int64_t> col;
    for (std::int64_t j : schedule) {
        if (skip && (*skip)[j]) continue;
        const int k = filt.boundary(j, faces);
        col.assign(faces.begin(), faces.begin() + k);
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const std::int64_t low = col.back();
            const std::int64_t owner = red.pivot_owner[low];
            if (owner < 0) break;
            add_column(col, stored[owner]);
        }
        if (!col.empty()) {
            const std::int64_t low = col.back();
            red.pivot_owner[low] = j;
            red.birth_of[j] = low;
            stored[j] = std::move(col);
            col.clear();
            if (skip) (*skip)[low] = 1;
        }
    }
    return red;
}

PersistencePair make_pair(const CubicalFiltration& filt, std::int64_t birth_pos,
                          std::int64_t death_pos /* -1 for essential */) {
    PersistencePair p;
    p.birth_cell = filt.cell_at(birth_pos);
    p.dim = p.birth_cell.dim;
    p.birth = p.birth_cell.filtration_value;
    if (death_pos >= 0) {
        p.death_cell = filt.cell_at(death_pos);
        p.death = p.death_cell->filtration_value;
    } else {
        p.death = filt.direction() == FiltrationDirection::Sublevel
                      ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
    }
    return p;
}

PersistenceDiagram assemble_diagram(const CubicalFiltration& filt, const Reduction& red) {
    const std::int64_t n = filt.cell_count();
    PersistenceDiagram dgm;
    dgm.direction = filt.direction();

    std::vector<std::pair<std::int64_t, std::int64_t>> raw; // (birth pos, death pos or -1)
    int essential_dim0 = 0;
    for (std::int64_t j = 0; j < n; ++j) {
        if (red.birth_of[j] >= 0) {
            const std::int64_t b = red.birth_of[j];
            if (filt.internal_value_at(b) != filt.internal_value_at(j)) raw.emplace_back(b, j);
        } else if (red.pivot_owner[j] < 0) {
            // Positive cell never destroyed: essential class.
            const int dim = filt.dim_at(j);
            internal_check(dim == 0, "essential class above dim 0 on a full grid");
            ++essential_dim0;
            raw.emplace_back(j, -1);
        }
    }
    internal_check(essential_dim0 == 1, "full grid must carry exactly one essential dim-0 class");

    std::sort(raw.begin(), raw.end());
    dgm.pairs.reserve(raw.size());
    for (auto [b, d] : raw) dgm.pairs.push_back(make_pair(filt, b, d));
    std::stable_sort(dgm.pairs.begin(), dgm.pairs.end(),
                     [](const PersistencePair& a, const PersistencePair& b) { return a.dim < b.dim; });
    return dgm;
}

} // namespace

std::vector<int> PersistenceDiagram::indices_of_dim(int dim) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
        if (pairs[i].dim == dim) out.push_back(i);
    return out;
}

PersistenceDiagram compute_persistence(const CubicalFiltration& filt, ReductionMode mode) {
    g_reduction_count.fetch_add(1, std::memory_order_relaxed);
    const std::int64_t n = filt.cell_count();

    std::vector<std::int64_t> schedule;
    schedule.reserve(n);
    Reduction red;
    if (mode == ReductionMode::Naive) {
        for (std::int64_t j = 0; j < n; ++j) schedule.push_back(j);
        red = reduce_columns(filt, schedule, nullptr);
    } else {
        // Clearing: reduce dim-2 columns first; their pivots are dim-1 cells
        // whose own columns are then known-positive and skipped. Column
        // additions never cross dimensions, so the pairing is unchanged.
        std::vector<char> skip(n, 0);
        for (std::int64_t j = 0; j < n; ++j)
            if (filt.dim_at(j) == 2) schedule.push_back(j);
        for (std::int64_t j = 0; j < n; ++j)
            if (filt.dim_at(j) == 1) schedule.push_back(j);
        red = reduce_columns(filt, schedule, &skip);
    }
    return assemble_diagram(filt, red);
}

BettiVector betti_at(const PersistenceDiagram& diagram, double t) {
    BettiVector out;
    for (const PersistencePair& p : diagram.pairs) {
        bool alive;
        if (diagram.direction == FiltrationDirection::Sublevel)
            alive = p.birth <= t && t < p.death;
        else
            alive = p.birth >= t && t > p.death;
        if (!alive) continue;
        if (p.dim == 0) ++out.beta0;
        else if (p.dim == 1) ++out.beta1;
    }
    return out;
}

ImagePersistence image_persistence(const CubicalFiltration& ambient, const CubicalFiltration& sub) {
    if (ambient.pixel_width() != sub.pixel_width() || ambient.pixel_height() != sub.pixel_height())
        throw ValidationError("image_persistence: grid shapes differ");
    if (ambient.direction() != sub.direction())
        throw ValidationError("image_persistence: filtration directions differ");
    if (!ambient.dominates(sub))
        throw ValidationError("image_persistence: sub filtration is not included in the ambient one");

    ImagePersistence out;
    out.sub_diagram = compute_persistence(sub);
    out.ambient_diagram = compute_persistence(ambient);
    g_reduction_count.fetch_add(1, std::memory_order_relaxed);

    const std::int64_t n = ambient.cell_count();

    // Reduce with columns visited in ambient order while pivot rows compare
    // in sub order: the surviving pivot of a column is the sub-latest
    // potential creator, pairing each sub birth with its ambient death.
    std::vector<std::int64_t> pivot_owner(n, -1);   // sub row position -> ambient column position
    std::vector<std::vector<std::int64_t>> stored(n);
    std::array<std::int64_t, 4> faces;
    std::vector<std::int64_t> col;
    for (std::int64_t j = 0; j < n; ++j) {
        const int k = ambient.boundary(j, faces);
        col.clear();
        for (int i = 0; i < k; ++i)
            col.push_back(sub.position_of(ambient.cell_id(faces[i])));
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const std::int64_t owner = pivot_owner[col.back()];
            if (owner < 0) break;
            add_column(col, stored[owner]);
        }
        if (!col.empty()) {
            pivot_owner[col.back()] = j;
            stored[j] = std::move(col);
            col.clear();
        }
    }

    // Sub bars are identified by their creator cell, ambient bars by their
    // destroyer cell (finite) or creator cell (essential).
    std::map<std::int64_t, int> ambient_by_destroyer;
    std::map<int, std::vector<std::pair<std::int64_t, int>>> ambient_essential; // dim -> (birth pos, idx)
    for (int i = 0; i < static_cast<int>(out.ambient_diagram.pairs.size()); ++i) {
        const PersistencePair& p = out.ambient_diagram.pairs[i];
        if (p.essential()) {
            const std::int64_t anchor_id =
                static_cast<std::int64_t>(p.birth_cell.anchor_row) * ambient.cell_grid_width() +
                p.birth_cell.anchor_col;
            ambient_essential[p.dim].emplace_back(ambient.position_of(anchor_id), i);
        } else {
            const std::int64_t anchor_id =
                static_cast<std::int64_t>(p.death_cell->anchor_row) * ambient.cell_grid_width() +
                p.death_cell->anchor_col;
            ambient_by_destroyer[anchor_id] = i;
        }
    }
    for (auto& [dim, list] : ambient_essential) std::sort(list.begin(), list.end());

    out.ambient_match.assign(out.sub_diagram.pairs.size(), std::nullopt);
    std::map<int, std::vector<std::pair<std::int64_t, int>>> sub_essential_unmatched;
    for (int i = 0; i < static_cast<int>(out.sub_diagram.pairs.size()); ++i) {
        const PersistencePair& p = out.sub_diagram.pairs[i];
        const std::int64_t creator_id =
            static_cast<std::int64_t>(p.birth_cell.anchor_row) * sub.cell_grid_width() +
            p.birth_cell.anchor_col;
        const std::int64_t row = sub.position_of(creator_id);
        const std::int64_t destroyer_col = pivot_owner[row];
        internal_check(p.essential() || destroyer_col >= 0,
                       "finite sub bar must die in the ambient filtration");
        if (destroyer_col < 0) {
            sub_essential_unmatched[p.dim].emplace_back(row, i);
            continue;
        }
        // The class born at the sub value of the creator survives into the
        // ambient filtration until the destroyer enters; the bar in the
        // image is non-empty only if birth strictly precedes death.
        if (!(sub.internal_value_at(row) < ambient.internal_value_at(destroyer_col)))
            continue;
        auto it = ambient_by_destroyer.find(ambient.cell_id(destroyer_col));
        if (it != ambient_by_destroyer.end())
            out.ambient_match[i] = it->second;
    }

    // Classes alive forever in both filtrations: pair them per dimension in
    // birth order. On full grids this is the single dim-0 essential class.
    for (auto& [dim, subs] : sub_essential_unmatched) {
        std::sort(subs.begin(), subs.end());
        auto& ambs = ambient_essential[dim];
        internal_check(subs.size() <= ambs.size(), "more essential sub classes than ambient ones");
        for (std::size_t k = 0; k < subs.size(); ++k)
            out.ambient_match[subs[k].second] = ambs[k].second;
    }
    return out;
}

namespace {

void append_double(std::string& out, double v) {
    if (std::isinf(v)) {
        out += v > 0 ? "inf" : "-inf";
        return;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double parse_double(const std::string& tok, const char* what) {
    if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ValidationError(std::string("diagram csv: bad ") + what + " value '" + tok + "'");
    return v;
}

} // namespace

std::string diagram_to_csv(const PersistenceDiagram& diagram) {
    std::string out = "dim,birth,death,birth_row,birth_col,death_row,death_col\n";
    for (const PersistencePair& p : diagram.pairs) {
        out += std::to_string(p.dim);
        out += ',';
        append_double(out, p.birth);
        out += ',';
        append_double(out, p.death);
        out += ',';
        out += std::to_string(p.birth_row());
        out += ',';
        out += std::to_string(p.birth_col());
        out += ',';
        out += std::to_string(p.death_row());
        out += ',';
        out += std::to_string(p.death_col());
        out += '\n';
    }
    return out;
}

PersistenceDiagram diagram_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "dim,birth,death,birth_row,birth_col,death_row,death_col")
        throw ValidationError("diagram csv: missing or malformed header");
    PersistenceDiagram dgm;
    bool superlevel = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        std::vector<std::string> tokens;
        while (std::getline(row, tok, ',')) tokens.push_back(tok);
        if (tokens.size() != 7)
            throw ValidationError("diagram csv: expected 7 columns");
        PersistencePair p;
        p.dim = static_cast<int>(parse_double(tokens[0], "dim"));
        p.birth = parse_double(tokens[1], "birth");
        p.death = parse_double(tokens[2], "death");
        const int br = static_cast<int>(parse_double(tokens[3], "birth_row"));
        const int bc = static_cast<int>(parse_double(tokens[4], "birth_col"));
        const int dr = static_cast<int>(parse_double(tokens[5], "death_row"));
        const int dc = static_cast<int>(parse_double(tokens[6], "death_col"));
        // Parsed cells keep critical vertices; original anchors are not part
        // of the format, so vertex anchors stand in.
        p.birth_cell = Cell{p.dim, 2 * br, 2 * bc, p.birth, br, bc};
        if (!std::isinf(p.death)) {
            p.death_cell = Cell{p.dim + 1, 2 * dr, 2 * dc, p.death, dr, dc};
        } else if (p.death < 0) {
            superlevel = true;
        }
        if (p.birth > p.death) superlevel = true;
        dgm.pairs.push_back(std::move(p));
    }
    dgm.direction = superlevel ? FiltrationDirection::Superlevel : FiltrationDirection::Sublevel;
    return dgm;
}

std::uint64_t diagram_computation_count() {
    return g_reduction_count.load(std::memory_order_relaxed);
}

} // namespace toposeg
