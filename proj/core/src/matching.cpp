#include "toposeg/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toposeg {

std::vector<int> solve_assignment(int rows, int cols, const std::vector<double>& cost,
                                  double& total_cost) {
    if (rows > cols)
        throw ValidationError("solve_assignment: more rows than columns");
    if (static_cast<std::size_t>(rows) * cols != cost.size())
        throw ValidationError("solve_assignment: matrix size mismatch");
    const double kInf = std::numeric_limits<double>::infinity();

    // Potential-based Hungarian algorithm, 1-indexed internally.
    std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
    std::vector<int> p(cols + 1, 0), way(cols + 1, 0);
    auto a = [&](int i, int j) { return cost[static_cast<std::size_t>(i - 1) * cols + (j - 1)]; };

    for (int i = 1; i <= rows; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(cols + 1, kInf);
        std::vector<char> used(cols + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= cols; ++j) {
                if (used[j]) continue;
                const double cur = a(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assignment(rows, -1);
    total_cost = 0.0;
    for (int j = 1; j <= cols; ++j) {
        if (p[j] == 0) continue;
        assignment[p[j] - 1] = j - 1;
        total_cost += a(p[j], j);
    }
    return assignment;
}

namespace {

double pair_cost(const PersistencePair& a, const PersistencePair& b, double p) {
    const double db = a.birth - b.birth;
    const double dd = a.death - b.death;
    return std::pow(db * db + dd * dd, p / 2.0);
}

double diagonal_cost(const PersistencePair& a, double p) {
    const double half_gap = 0.5 * (a.birth - a.death);
    return std::pow(2.0 * half_gap * half_gap, p / 2.0);
}

} // namespace

WassersteinResult wasserstein_matching(const PersistenceDiagram& pred,
                                       const PersistenceDiagram& target, double p) {
    if (!(p >= 1.0))
        throw ValidationError("wasserstein_matching: exponent must be >= 1");

    WassersteinResult out;
    double total = 0.0;
    for (int dim = 0; dim <= 2; ++dim) {
        std::vector<int> pi, ti;
        for (int i = 0; i < static_cast<int>(pred.pairs.size()); ++i)
            if (pred.pairs[i].dim == dim && !pred.pairs[i].essential()) pi.push_back(i);
        for (int i = 0; i < static_cast<int>(target.pairs.size()); ++i)
            if (target.pairs[i].dim == dim && !target.pairs[i].essential()) ti.push_back(i);
        const int n = static_cast<int>(pi.size());
        const int m = static_cast<int>(ti.size());
        if (n == 0 && m == 0) continue;

        // Augmented square matrix: every point may use a diagonal slot at
        // its own projection cost; diagonal-to-diagonal transfers are free.
        const int size = n + m;
        std::vector<double> cost(static_cast<std::size_t>(size) * size, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j)
                cost[static_cast<std::size_t>(i) * size + j] =
                    pair_cost(pred.pairs[pi[i]], target.pairs[ti[j]], p);
            const double dc = diagonal_cost(pred.pairs[pi[i]], p);
            for (int j = m; j < size; ++j) cost[static_cast<std::size_t>(i) * size + j] = dc;
        }
        for (int i = n; i < size; ++i)
            for (int j = 0; j < m; ++j)
                cost[static_cast<std::size_t>(i) * size + j] = diagonal_cost(target.pairs[ti[j]], p);

        double dim_total = 0.0;
        std::vector<int> assign = solve_assignment(size, size, cost, dim_total);
        total += dim_total;
        for (int i = 0; i < n; ++i) {
            if (assign[i] < m) out.matching.matched.emplace_back(pi[i], ti[assign[i]]);
            else out.matching.pred_to_diagonal.push_back(pi[i]);
        }
        for (int i = n; i < size; ++i)
            if (assign[i] < m) out.matching.target_to_diagonal.push_back(ti[assign[i]]);
    }
    out.distance = std::pow(total, 1.0 / p);
    return out;
}

namespace {

BettiMatchingResult betti_matching_impl(const LikelihoodMap& pred, const LikelihoodMap& target) {
    if (!pred.same_shape(target))
        throw ValidationError("betti_matching: grid shapes differ");

    LikelihoodMap comparison(pred.width(), pred.height());
    for (int r = 0; r < pred.height(); ++r)
        for (int c = 0; c < pred.width(); ++c)
            comparison.at(r, c) = std::min(pred.at(r, c), target.at(r, c));

    // Superlevel sets of min(P, G) are intersections of the superlevel sets
    // of P and G, so the comparison filtration includes into both.
    const auto dir = FiltrationDirection::Superlevel;
    CubicalFiltration fp = CubicalFiltration::build(pred, dir);
    CubicalFiltration fg = CubicalFiltration::build(target, dir);
    CubicalFiltration fc = CubicalFiltration::build(comparison, dir);

    ImagePersistence via_pred = image_persistence(fp, fc);
    ImagePersistence via_target = image_persistence(fg, fc);
    if (via_pred.sub_diagram.pairs.size() != via_target.sub_diagram.pairs.size())
        throw std::logic_error("betti_matching: comparison diagrams disagree");

    BettiMatchingResult out;
    out.pred_diagram = std::move(via_pred.ambient_diagram);
    out.target_diagram = std::move(via_target.ambient_diagram);

    std::vector<char> pred_used(out.pred_diagram.pairs.size(), 0);
    std::vector<char> target_used(out.target_diagram.pairs.size(), 0);
    for (std::size_t k = 0; k < via_pred.sub_diagram.pairs.size(); ++k) {
        if (!via_pred.ambient_match[k] || !via_target.ambient_match[k]) continue;
        const int pidx = *via_pred.ambient_match[k];
        const int tidx = *via_target.ambient_match[k];
        out.matching.matched.emplace_back(pidx, tidx);
        pred_used[pidx] = 1;
        target_used[tidx] = 1;
    }
    for (int i = 0; i < static_cast<int>(pred_used.size()); ++i)
        if (!pred_used[i]) out.matching.pred_to_diagonal.push_back(i);
    for (int i = 0; i < static_cast<int>(target_used.size()); ++i)
        if (!target_used[i]) out.matching.target_to_diagonal.push_back(i);
    return out;
}

} // namespace

BettiMatchingResult betti_matching(const LikelihoodMap& pred, const LikelihoodMap& target) {
    return betti_matching_impl(pred, target);
}

BettiMatchingResult betti_matching(const LikelihoodMap& pred, const BinaryMask& target) {
    return betti_matching_impl(pred, to_likelihood(target));
}

} // namespace toposeg
