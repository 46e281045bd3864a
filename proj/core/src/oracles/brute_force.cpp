#include "toposeg/oracles/brute_force.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "toposeg/error.hpp"

namespace toposeg::oracles {

Grid<std::int64_t> brute_force_edt_squared(const BinaryMask& mask, EdtRegion region) {
    const std::uint8_t target = region == EdtRegion::Foreground ? 1 : 0;
    std::vector<std::pair<int, int>> sites;
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c)
            if (mask.at(r, c) == target) sites.emplace_back(r, c);

    Grid<std::int64_t> out(mask.width(), mask.height(), kEdtUnreachable);
    if (sites.empty()) return out;
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c) {
            std::int64_t best = kEdtUnreachable;
            for (auto [sr, sc] : sites) {
                const std::int64_t dr = r - sr, dc = c - sc;
                best = std::min(best, dr * dr + dc * dc);
            }
            out.at(r, c) = best;
        }
    return out;
}

namespace {

using Point = std::pair<double, double>; // (birth, death)

double point_cost(const Point& a, const Point& b, double p) {
    const double db = a.first - b.first, dd = a.second - b.second;
    return std::pow(std::sqrt(db * db + dd * dd), p);
}

double diagonal_cost(const Point& a, double p) {
    return std::pow(std::abs(a.first - a.second) / std::sqrt(2.0), p);
}

// Every matching of A against B: each point of A pairs with an unused point
// of B or its diagonal projection; leftover B points go to the diagonal.
double best_assignment(const std::vector<Point>& a, const std::vector<Point>& b, std::size_t i,
                       unsigned used, double p) {
    if (i == a.size()) {
        double rest = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!(used >> j & 1u)) rest += diagonal_cost(b[j], p);
        return rest;
    }
    double best = diagonal_cost(a[i], p) + best_assignment(a, b, i + 1, used, p);
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!(used >> j & 1u))
            best = std::min(best, point_cost(a[i], b[j], p) +
                                      best_assignment(a, b, i + 1, used | (1u << j), p));
    return best;
}

std::vector<Point> finite_points(const PersistenceDiagram& diagram, int dim) {
    std::vector<Point> pts;
    for (const PersistencePair& pair : diagram.pairs)
        if (pair.dim == dim && !pair.essential()) pts.emplace_back(pair.birth, pair.death);
    return pts;
}

} // namespace

double brute_force_wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, double p,
                               int max_points) {
    if (!(p >= 1.0)) throw ValidationError("wasserstein oracle: p must be >= 1");
    double total = 0.0;
    for (int dim = 0; dim <= 2; ++dim) {
        const std::vector<Point> pa = finite_points(a, dim), pb = finite_points(b, dim);
        if (static_cast<int>(pa.size()) > max_points || static_cast<int>(pb.size()) > max_points)
            throw ValidationError("wasserstein oracle: too many bars for exhaustive search");
        total += best_assignment(pa, pb, 0, 0u, p);
    }
    return std::pow(total, 1.0 / p);
}

} // namespace toposeg::oracles
