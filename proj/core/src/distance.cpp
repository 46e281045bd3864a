#include "toposeg/distance.hpp"

#include <cmath>

namespace toposeg {

DistanceField::DistanceField(int width, int height, double fill) : Grid(width, height, fill) {}

DistanceField::DistanceField(int width, int height, std::vector<double> values)
    : Grid(width, height, std::move(values)) {}

DistanceField::DistanceField(RealGrid grid)
    : DistanceField(grid.width(), grid.height(), std::move(grid.data())) {}

namespace {

// Parabola crossing abscissa as an exact rational; den == 0 encodes -inf
// (the first parabola owns the whole line until displaced).
struct Crossing {
    std::int64_t num = -1;
    std::int64_t den = 0;
};

bool crossing_less(const Crossing& a, const Crossing& b) {
    if (a.den == 0) return b.den != 0;
    if (b.den == 0) return false;
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

bool crossing_less_than_int(const Crossing& a, std::int64_t x) {
    if (a.den == 0) return true;
    return static_cast<__int128>(a.num) < static_cast<__int128>(x) * a.den;
}

// 1D squared-distance lower envelope (two-pass separable scheme). f holds
// squared distances from the column pass, kEdtUnreachable marks rows with no
// source. Envelope intersections are compared with cross-multiplied integer
// arithmetic, so the pass is exact for any grid size.
void envelope_pass(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out) {
    const int n = static_cast<int>(f.size());
    out.assign(n, kEdtUnreachable);

    std::vector<int> hull;          // parabola anchors, increasing
    std::vector<Crossing> bound;    // bound[i]: hull[i] wins for x > bound[i]
    hull.reserve(n);
    bound.reserve(n);

    auto crossing = [&f](int p, int q) {
        // x where the parabola anchored at q overtakes the one at p (q > p):
        // ((f[q]+q^2) - (f[p]+p^2)) / (2(q-p)).
        return Crossing{f[q] - f[p] + static_cast<std::int64_t>(q + p) * (q - p),
                        2 * static_cast<std::int64_t>(q - p)};
    };

    for (int q = 0; q < n; ++q) {
        if (f[q] == kEdtUnreachable) continue;
        Crossing s;
        while (!hull.empty()) {
            s = crossing(hull.back(), q);
            if (crossing_less(bound.back(), s)) break;
            hull.pop_back();
            bound.pop_back();
        }
        bound.push_back(hull.empty() ? Crossing{} : s);
        hull.push_back(q);
    }
    if (hull.empty()) return;

    int k = 0;
    for (int x = 0; x < n; ++x) {
        while (k + 1 < static_cast<int>(hull.size()) && crossing_less_than_int(bound[k + 1], x)) ++k;
        const std::int64_t dx = x - hull[k];
        out[x] = f[hull[k]] + dx * dx;
    }
}

} // namespace

Grid<std::int64_t> edt_squared(const BinaryMask& mask, EdtRegion region) {
    const int w = mask.width(), h = mask.height();
    const std::uint8_t target = region == EdtRegion::Foreground ? 1 : 0;

    // Column pass: exact 1D distances along each column.
    Grid<std::int64_t> col(w, h, kEdtUnreachable);
    for (int c = 0; c < w; ++c) {
        int last = -1;
        for (int r = 0; r < h; ++r) {
            if (mask.at(r, c) == target) last = r;
            if (last >= 0) {
                const std::int64_t d = r - last;
                col.at(r, c) = d * d;
            }
        }
        last = -1;
        for (int r = h - 1; r >= 0; --r) {
            if (mask.at(r, c) == target) last = r;
            if (last >= 0) {
                const std::int64_t d = last - r;
                col.at(r, c) = std::min(col.at(r, c), d * d);
            }
        }
    }

    // Row pass: lower envelope combining the column results.
    Grid<std::int64_t> out(w, h, kEdtUnreachable);
    std::vector<std::int64_t> f(w), g;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) f[c] = col.at(r, c);
        envelope_pass(f, g);
        for (int c = 0; c < w; ++c) out.at(r, c) = g[c];
    }
    return out;
}

RealGrid edt(const BinaryMask& mask, EdtRegion region) {
    Grid<std::int64_t> sq = edt_squared(mask, region);
    RealGrid out(mask.width(), mask.height());
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c) {
            const std::int64_t v = sq.at(r, c);
            out.at(r, c) = v == kEdtUnreachable
                               ? std::numeric_limits<double>::infinity()
                               : std::sqrt(static_cast<double>(v));
        }
    return out;
}

DistanceField sdf(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    const double cap = w + h;

    bool any_fg = false, any_bg = false;
    for (std::uint8_t v : mask.data()) (v ? any_fg : any_bg) = true;
    if (!any_fg) return DistanceField(w, h, -cap);
    if (!any_bg) return DistanceField(w, h, cap);

    Grid<std::int64_t> to_fg = edt_squared(mask, EdtRegion::Foreground);
    Grid<std::int64_t> to_bg = edt_squared(mask, EdtRegion::Background);
    DistanceField out(w, h);
    // Exactly one term is nonzero at each pixel: a pixel is either in the
    // foreground (distance-to-foreground 0) or in the background.
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            out.at(r, c) = std::sqrt(static_cast<double>(to_bg.at(r, c))) -
                           std::sqrt(static_cast<double>(to_fg.at(r, c)));
    return out;
}

BinaryMask threshold_mask(const DistanceField& field, double tau) {
    BinaryMask out(field.width(), field.height());
    for (int r = 0; r < field.height(); ++r)
        for (int c = 0; c < field.width(); ++c)
            out.at(r, c) = field.at(r, c) >= tau ? 1 : 0;
    return out;
}

LikelihoodMap sdf_soft_target(const DistanceField& field, double scale) {
    if (!(scale > 0))
        throw ValidationError("sdf_soft_target: scale must be positive");
    LikelihoodMap out(field.width(), field.height());
    for (int r = 0; r < field.height(); ++r)
        for (int c = 0; c < field.width(); ++c)
            out.at(r, c) = 0.5 * (std::tanh(scale * field.at(r, c)) + 1.0);
    return out;
}

} // namespace toposeg
