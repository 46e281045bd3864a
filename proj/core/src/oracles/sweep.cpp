#include "toposeg/oracles/sweep.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <vector>

namespace toposeg::oracles {

namespace {

BettiVector betti_of_kept(const std::vector<char>& keep, int w, int h) {
    auto idx = [w](int r, int c) { return static_cast<std::size_t>(r) * w + c; };

    std::int64_t components = 0;
    std::vector<char> seen(keep.size(), 0);
    std::queue<std::pair<int, int>> frontier;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (!keep[idx(r, c)] || seen[idx(r, c)]) continue;
            ++components;
            seen[idx(r, c)] = 1;
            frontier.emplace(r, c);
            while (!frontier.empty()) {
                auto [cr, cc] = frontier.front();
                frontier.pop();
                constexpr int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = cr + dr[k], nc = cc + dc[k];
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    if (!keep[idx(nr, nc)] || seen[idx(nr, nc)]) continue;
                    seen[idx(nr, nc)] = 1;
                    frontier.emplace(nr, nc);
                }
            }
        }

    std::int64_t v = 0, e = 0, f = 0;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (!keep[idx(r, c)]) continue;
            ++v;
            if (c + 1 < w && keep[idx(r, c + 1)]) ++e;
            if (r + 1 < h && keep[idx(r + 1, c)]) ++e;
            if (r + 1 < h && c + 1 < w && keep[idx(r + 1, c)] && keep[idx(r, c + 1)] &&
                keep[idx(r + 1, c + 1)])
                ++f;
        }
    // No enclosed voids in the plane, so beta1 = beta0 - chi.
    BettiVector out;
    out.beta0 = components;
    out.beta1 = components - (v - e + f);
    return out;
}

} // namespace

BettiVector sweep_betti_at(const Grid<double>& image, FiltrationDirection direction, double t) {
    std::vector<char> keep(image.size(), 0);
    const bool super = direction == FiltrationDirection::Superlevel;
    for (int r = 0; r < image.height(); ++r)
        for (int c = 0; c < image.width(); ++c) {
            const double v = image.at(r, c);
            keep[static_cast<std::size_t>(r) * image.width() + c] = super ? v >= t : v <= t;
        }
    return betti_of_kept(keep, image.width(), image.height());
}

BettiVector sweep_betti_at(const BinaryMask& mask, FiltrationDirection direction, double t) {
    Grid<double> image(mask.width(), mask.height(), 0.0);
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c) image.at(r, c) = mask.at(r, c);
    return sweep_betti_at(image, direction, t);
}

BettiCurve sweep_betti_curve(const Grid<double>& image, FiltrationDirection direction) {
    BettiCurve curve;
    curve.thresholds.assign(image.data().begin(), image.data().end());
    std::sort(curve.thresholds.begin(), curve.thresholds.end());
    curve.thresholds.erase(std::unique(curve.thresholds.begin(), curve.thresholds.end()),
                           curve.thresholds.end());
    curve.betti.reserve(curve.thresholds.size());
    for (double t : curve.thresholds) curve.betti.push_back(sweep_betti_at(image, direction, t));
    return curve;
}

Dim0Events sweep_dim0_events(const Grid<double>& image, FiltrationDirection direction) {
    const int w = image.width(), h = image.height();
    const double sign = direction == FiltrationDirection::Superlevel ? -1.0 : 1.0;
    std::vector<double> val(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) val[static_cast<std::size_t>(r) * w + c] = sign * image.at(r, c);

    // Events: vertices then 4-neighbor edges, ordered like the filtration
    // (value, dim, id). Edge ids only need to order consistently after all
    // equal-valued vertices, which the dim component guarantees.
    struct Event {
        double value;
        int dim;
        std::int64_t id; // vertex index, or edge index offset by pixel count
        int a, b;        // endpoints (vertex: a == b)
    };
    std::vector<Event> events;
    events.reserve(static_cast<std::size_t>(w) * h * 3);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const int v = r * w + c;
            events.push_back({val[v], 0, v, v, v});
            if (c + 1 < w) events.push_back({std::max(val[v], val[v + 1]), 1, v, v, v + 1});
            if (r + 1 < h)
                events.push_back(
                    {std::max(val[v], val[v + w]), 1, v + w * h, v, v + w});
        }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
        return std::tie(x.value, x.dim, x.id) < std::tie(y.value, y.dim, y.id);
    });

    std::vector<int> parent(static_cast<std::size_t>(w) * h, -1);
    std::vector<std::int64_t> birth_rank(static_cast<std::size_t>(w) * h, -1);
    std::vector<double> birth_value(static_cast<std::size_t>(w) * h, 0.0);
    auto find = [&parent](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    Dim0Events out;
    std::int64_t next_rank = 0;
    for (const Event& ev : events) {
        if (ev.dim == 0) {
            parent[ev.a] = ev.a;
            birth_rank[ev.a] = next_rank++;
            birth_value[ev.a] = ev.value;
            continue;
        }
        const int ra = find(ev.a), rb = find(ev.b);
        if (ra == rb) continue;
        const int dying = birth_rank[ra] > birth_rank[rb] ? ra : rb;
        const int living = dying == ra ? rb : ra;
        if (birth_value[dying] != ev.value) ++out.merge_events;
        parent[dying] = living;
    }
    std::int64_t roots = 0;
    for (int v = 0; v < w * h; ++v)
        if (parent[v] == v) ++roots;
    out.essential_components = roots;
    return out;
}

} // namespace toposeg::oracles
