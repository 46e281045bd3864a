#include "toposeg/oracles/spatial_matching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "toposeg/error.hpp"

namespace toposeg::oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Events replicate the documented filtration order (internal value, dim,
// doubled-grid cell id), so ties resolve exactly like the engine's total
// order; the sweep itself shares no code with it.
struct Event {
    double value;
    int dim;
    std::int64_t cell_id; // doubled-grid linear id
    int a, b;             // endpoint vertex ids (vertex events: a == b)
};

std::int64_t vertex_cell_id(int r, int c, int w) {
    return static_cast<std::int64_t>(2 * r) * (2 * w - 1) + 2 * c;
}

std::vector<Event> make_events(const std::vector<double>& val, int w, int h) {
    std::vector<Event> events;
    events.reserve(static_cast<std::size_t>(w) * h * 3);
    const std::int64_t cw = 2 * w - 1;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const int v = r * w + c;
            events.push_back({val[v], 0, vertex_cell_id(r, c, w), v, v});
            if (c + 1 < w)
                events.push_back({std::max(val[v], val[v + 1]), 1,
                                  static_cast<std::int64_t>(2 * r) * cw + 2 * c + 1, v, v + 1});
            if (r + 1 < h)
                events.push_back({std::max(val[v], val[v + w]), 1,
                                  static_cast<std::int64_t>(2 * r + 1) * cw + 2 * c, v, v + w});
        }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
        return std::tie(x.value, x.dim, x.cell_id) < std::tie(y.value, y.dim, y.cell_id);
    });
    return events;
}

// Rank of each vertex in the filtration order (smaller = earlier = elder).
std::vector<std::int64_t> vertex_ranks(const std::vector<double>& val, int w, int h) {
    std::vector<int> ids(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    std::sort(ids.begin(), ids.end(),
              [&val](int x, int y) { return std::tie(val[x], x) < std::tie(val[y], y); });
    std::vector<std::int64_t> rank(ids.size());
    for (std::size_t pos = 0; pos < ids.size(); ++pos) rank[ids[pos]] = static_cast<std::int64_t>(pos);
    return rank;
}

struct Uf {
    std::vector<int> parent;
    explicit Uf(std::size_t n) : parent(n, -1) {}
    void make(int v) { parent[v] = v; }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
};

// Every vertex creates one dim-0 class; these arrays describe its bar.
struct VertexBars {
    std::vector<double> death_int;        // +inf while essential
    std::vector<std::int64_t> death_edge; // doubled-grid edge id, -1 if essential
};

VertexBars sweep_dim0(const std::vector<double>& val, const std::vector<std::int64_t>& rank, int w,
                      int h) {
    VertexBars bars;
    bars.death_int.assign(val.size(), kInf);
    bars.death_edge.assign(val.size(), -1);
    Uf uf(val.size());
    std::vector<int> creator(val.size(), -1); // root -> elder vertex of its component
    for (const Event& ev : make_events(val, w, h)) {
        if (ev.dim == 0) {
            uf.make(ev.a);
            creator[ev.a] = ev.a;
            continue;
        }
        const int ra = uf.find(ev.a), rb = uf.find(ev.b);
        if (ra == rb) continue;
        const int ca = creator[ra], cb = creator[rb];
        const int dying = rank[ca] > rank[cb] ? ca : cb;
        const int living = dying == ca ? cb : ca;
        bars.death_int[dying] = ev.value;
        bars.death_edge[dying] = ev.cell_id;
        uf.parent[ra] = rb;
        creator[rb] = living;
    }
    return bars;
}

struct ImageDeath {
    int vertex;           // sub class creator whose image dies
    std::int64_t edge;    // ambient edge (doubled-grid id) responsible
    double value;         // ambient internal value of that edge
};

// Union-find over ambient events tracking, per ambient component, the elder
// vertex in SUB order: each merge kills the image of the sub-younger rep.
std::vector<ImageDeath> sweep_image_dim0(const std::vector<double>& amb_val,
                                         const std::vector<std::int64_t>& sub_rank, int w, int h) {
    std::vector<ImageDeath> deaths;
    Uf uf(amb_val.size());
    std::vector<int> rep(amb_val.size(), -1);
    for (const Event& ev : make_events(amb_val, w, h)) {
        if (ev.dim == 0) {
            uf.make(ev.a);
            rep[ev.a] = ev.a;
            continue;
        }
        const int ra = uf.find(ev.a), rb = uf.find(ev.b);
        if (ra == rb) continue;
        const int sa = rep[ra], sb = rep[rb];
        const int dying = sub_rank[sa] > sub_rank[sb] ? sa : sb;
        const int living = dying == sa ? sb : sa;
        deaths.push_back({dying, ev.cell_id, ev.value});
        uf.parent[ra] = rb;
        rep[rb] = living;
    }
    return deaths;
}

} // namespace

SpatialMatching spatial_dim0_matching(const Grid<double>& sub, const Grid<double>& ambient) {
    if (!sub.same_shape(ambient))
        throw ValidationError("spatial matching oracle: grid shapes differ");
    const int w = sub.width(), h = sub.height();
    std::vector<double> fs(static_cast<std::size_t>(w) * h), fa(fs.size());
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (sub.at(r, c) > ambient.at(r, c))
                throw ValidationError("spatial matching oracle: sub must be <= ambient pointwise");
            fs[static_cast<std::size_t>(r) * w + c] = -sub.at(r, c);
            fa[static_cast<std::size_t>(r) * w + c] = -ambient.at(r, c);
        }

    const std::vector<std::int64_t> sub_rank = vertex_ranks(fs, w, h);
    const std::vector<std::int64_t> amb_rank = vertex_ranks(fa, w, h);
    const VertexBars sub_bars = sweep_dim0(fs, sub_rank, w, h);
    const VertexBars amb_bars = sweep_dim0(fa, amb_rank, w, h);

    std::unordered_map<std::int64_t, int> edge_to_amb_dying;
    for (std::size_t v = 0; v < fa.size(); ++v)
        if (amb_bars.death_edge[v] >= 0) edge_to_amb_dying[amb_bars.death_edge[v]] = static_cast<int>(v);

    SpatialMatching out;
    // Report nonzero-persistence bars in filtration order of their creator.
    std::vector<int> sub_index(fs.size(), -1), amb_index(fa.size(), -1);
    auto emit = [w](std::vector<SpatialBar>& bars, std::vector<int>& index,
                    const std::vector<double>& internal, const VertexBars& vb,
                    const std::vector<std::int64_t>& rank) {
        std::vector<int> order(internal.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&rank](int x, int y) { return rank[x] < rank[y]; });
        for (int v : order) {
            const bool essential = vb.death_edge[v] < 0;
            if (!essential && vb.death_int[v] == internal[v]) continue; // zero persistence
            SpatialBar bar;
            bar.birth = -internal[v];
            bar.death = essential ? -kInf : -vb.death_int[v];
            bar.birth_row = v / w;
            bar.birth_col = v % w;
            bar.essential = essential;
            index[v] = static_cast<int>(bars.size());
            bars.push_back(bar);
        }
    };
    emit(out.sub_bars, sub_index, fs, sub_bars, sub_rank);
    emit(out.ambient_bars, amb_index, fa, amb_bars, amb_rank);
    out.ambient_match.assign(out.sub_bars.size(), std::nullopt);

    for (const ImageDeath& death : sweep_image_dim0(fa, sub_rank, w, h)) {
        const auto it = edge_to_amb_dying.find(death.edge);
        if (it == edge_to_amb_dying.end())
            throw std::logic_error("image merge edge kills no ambient class");
        const int s = death.vertex, va = it->second;
        if (!(fs[s] < death.value)) continue;   // empty image bar
        if (sub_index[s] < 0) continue;         // zero-persistence sub bar
        if (amb_index[va] < 0) continue;        // zero-persistence ambient bar
        out.ambient_match[sub_index[s]] = amb_index[va];
    }

    // The surviving classes are the globally elder vertices on both sides;
    // their essential bars pair with each other.
    const auto elder = [](const std::vector<std::int64_t>& rank) {
        return static_cast<int>(std::min_element(rank.begin(), rank.end()) - rank.begin());
    };
    out.ambient_match[sub_index[elder(sub_rank)]] = amb_index[elder(amb_rank)];
    return out;
}

std::vector<std::pair<SpatialBar, SpatialBar>> spatial_betti_dim0(const Grid<double>& pred,
                                                                  const Grid<double>& target) {
    if (!pred.same_shape(target))
        throw ValidationError("spatial matching oracle: grid shapes differ");
    Grid<double> comparison(pred.width(), pred.height(), 0.0);
    for (int r = 0; r < pred.height(); ++r)
        for (int c = 0; c < pred.width(); ++c)
            comparison.at(r, c) = std::min(pred.at(r, c), target.at(r, c));

    const SpatialMatching to_pred = spatial_dim0_matching(comparison, pred);
    const SpatialMatching to_target = spatial_dim0_matching(comparison, target);
    if (!(to_pred.sub_bars == to_target.sub_bars))
        throw std::logic_error("comparison-image sweeps disagree");

    std::vector<std::pair<SpatialBar, SpatialBar>> pairs;
    for (std::size_t i = 0; i < to_pred.sub_bars.size(); ++i)
        if (to_pred.ambient_match[i] && to_target.ambient_match[i])
            pairs.emplace_back(to_pred.ambient_bars[*to_pred.ambient_match[i]],
                               to_target.ambient_bars[*to_target.ambient_match[i]]);
    return pairs;
}

} // namespace toposeg::oracles
