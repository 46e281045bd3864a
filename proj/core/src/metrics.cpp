#include "toposeg/metrics.hpp"

#include <cmath>

namespace toposeg {

namespace {

void check_shapes(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b))
        throw ValidationError("metrics: grid shapes differ");
}

std::int64_t count_fg(const BinaryMask& m) {
    std::int64_t n = 0;
    for (auto v : m.data()) n += v;
    return n;
}

std::int64_t count_overlap(const BinaryMask& a, const BinaryMask& b) {
    std::int64_t n = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) n += a.data()[i] & b.data()[i];
    return n;
}

} // namespace

double dice(const BinaryMask& pred, const BinaryMask& gt) {
    check_shapes(pred, gt);
    const std::int64_t p = count_fg(pred), g = count_fg(gt);
    if (p + g == 0) return 1.0;
    return 2.0 * count_overlap(pred, gt) / static_cast<double>(p + g);
}

double iou(const BinaryMask& pred, const BinaryMask& gt) {
    check_shapes(pred, gt);
    const std::int64_t inter = count_overlap(pred, gt);
    const std::int64_t uni = count_fg(pred) + count_fg(gt) - inter;
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double pixel_accuracy(const BinaryMask& pred, const BinaryMask& gt) {
    check_shapes(pred, gt);
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < pred.data().size(); ++i)
        correct += pred.data()[i] == gt.data()[i];
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

LossGrad soft_dice_loss(const LikelihoodMap& pred, const BinaryMask& gt) {
    if (!pred.same_shape(gt))
        throw ValidationError("soft_dice_loss: grid shapes differ");
    constexpr double eps = 1.0;
    double inter = 0.0, sums = 0.0;
    for (int r = 0; r < pred.height(); ++r)
        for (int c = 0; c < pred.width(); ++c) {
            inter += pred.at(r, c) * gt.at(r, c);
            sums += pred.at(r, c) + gt.at(r, c);
        }
    const double num = 2.0 * inter + eps;
    const double den = sums + eps;

    LossGrad out;
    out.value = 1.0 - num / den;
    out.dice_term = out.value;
    out.grad = RealGrid(pred.width(), pred.height());
    for (int r = 0; r < pred.height(); ++r)
        for (int c = 0; c < pred.width(); ++c)
            out.grad.at(r, c) = (num - 2.0 * gt.at(r, c) * den) / (den * den);
    return out;
}

namespace {

// Zhang-Suen neighborhood in the conventional p2..p9 clockwise order
// starting north; cells outside the image count as background.
struct Neighborhood {
    std::array<int, 8> p;
    int b_count;
    int a_count;
};

Neighborhood neighborhood(const BinaryMask& m, int r, int c) {
    auto px = [&](int rr, int cc) -> int {
        return m.in_bounds(rr, cc) ? m.at(rr, cc) : 0;
    };
    Neighborhood n;
    n.p = {px(r - 1, c), px(r - 1, c + 1), px(r, c + 1), px(r + 1, c + 1),
           px(r + 1, c), px(r + 1, c - 1), px(r, c - 1), px(r - 1, c - 1)};
    n.b_count = 0;
    n.a_count = 0;
    for (int i = 0; i < 8; ++i) {
        n.b_count += n.p[i];
        if (n.p[i] == 0 && n.p[(i + 1) % 8] == 1) ++n.a_count;
    }
    return n;
}

} // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
    BinaryMask cur = mask;
    bool changed = true;
    std::vector<std::pair<int, int>> doomed;
    while (changed) {
        changed = false;
        for (int phase = 0; phase < 2; ++phase) {
            doomed.clear();
            for (int r = 0; r < cur.height(); ++r) {
                for (int c = 0; c < cur.width(); ++c) {
                    if (!cur.at(r, c)) continue;
                    const Neighborhood n = neighborhood(cur, r, c);
                    if (n.b_count < 2 || n.b_count > 6 || n.a_count != 1) continue;
                    // p[0]=N, p[2]=E, p[4]=S, p[6]=W.
                    const bool cond = phase == 0
                        ? (n.p[0] * n.p[2] * n.p[4] == 0 && n.p[2] * n.p[4] * n.p[6] == 0)
                        : (n.p[0] * n.p[2] * n.p[6] == 0 && n.p[0] * n.p[4] * n.p[6] == 0);
                    if (cond) doomed.emplace_back(r, c);
                }
            }
            for (auto [r, c] : doomed) cur.at(r, c) = 0;
            if (!doomed.empty()) changed = true;
        }
    }
    return cur;
}

double cl_dice(const BinaryMask& pred, const BinaryMask& gt) {
    check_shapes(pred, gt);
    const BinaryMask sp = skeletonize(pred);
    const BinaryMask sl = skeletonize(gt);
    const std::int64_t sp_n = count_fg(sp), sl_n = count_fg(sl);
    if (sp_n == 0 && sl_n == 0) return 1.0;
    if (sp_n == 0 || sl_n == 0) return 0.0;
    const double tprec = static_cast<double>(count_overlap(sp, gt)) / static_cast<double>(sp_n);
    const double tsens = static_cast<double>(count_overlap(sl, pred)) / static_cast<double>(sl_n);
    if (tprec + tsens == 0.0) return 0.0;
    return 2.0 * tprec * tsens / (tprec + tsens);
}

double voi(const BinaryMask& pred, const BinaryMask& gt) {
    check_shapes(pred, gt);
    // 2x2 joint histogram of (pred label, gt label).
    std::array<std::array<std::int64_t, 2>, 2> joint{{{0, 0}, {0, 0}}};
    for (std::size_t i = 0; i < pred.data().size(); ++i)
        ++joint[pred.data()[i]][gt.data()[i]];
    const double total = static_cast<double>(pred.size());

    auto h_term = [&](std::int64_t n) {
        if (n == 0) return 0.0;
        const double q = n / total;
        return -q * std::log(q);
    };
    // Grouped so that swapping the arguments only exchanges operands of
    // commutative additions: voi(a, b) == voi(b, a) bit-exactly.
    const double h_joint = (h_term(joint[0][0]) + h_term(joint[1][1])) +
                           (h_term(joint[0][1]) + h_term(joint[1][0]));
    const double h_pred = h_term(joint[0][0] + joint[0][1]) + h_term(joint[1][0] + joint[1][1]);
    const double h_gt = h_term(joint[0][0] + joint[1][0]) + h_term(joint[0][1] + joint[1][1]);
    // H(A) + H(B) - 2 I(A,B) rewritten through the joint entropy.
    return 2.0 * h_joint - (h_pred + h_gt);
}

std::pair<std::int64_t, std::int64_t> betti_error(const BinaryMask& pred, const BinaryMask& gt) {
    check_shapes(pred, gt);
    auto betti_of = [](const BinaryMask& m) {
        const auto filt =
            CubicalFiltration::build(to_likelihood(m), FiltrationDirection::Superlevel);
        return betti_at(compute_persistence(filt), 1.0);
    };
    const BettiVector bp = betti_of(pred);
    const BettiVector bg = betti_of(gt);
    return {std::abs(bp.beta0 - bg.beta0), std::abs(bp.beta1 - bg.beta1)};
}

BettiVector component_betti(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<std::int64_t> parent(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<std::int64_t>(i);
    auto find = [&](std::int64_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::int64_t vertices = 0, edges = 0, squares = 0;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            ++vertices;
            const std::int64_t id = static_cast<std::int64_t>(r) * w + c;
            if (c + 1 < w && mask.at(r, c + 1)) {
                ++edges;
                parent[find(id)] = find(id + 1);
            }
            if (r + 1 < h && mask.at(r + 1, c)) {
                ++edges;
                parent[find(id)] = find(id + w);
            }
            if (r + 1 < h && c + 1 < w && mask.at(r, c + 1) && mask.at(r + 1, c) &&
                mask.at(r + 1, c + 1))
                ++squares;
        }

    BettiVector out;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const std::int64_t id = static_cast<std::int64_t>(r) * w + c;
            if (mask.at(r, c) && find(id) == id) ++out.beta0;
        }
    out.beta1 = out.beta0 - (vertices - edges + squares);
    return out;
}

MetricReport compute_metrics(const BinaryMask& pred, const BinaryMask& gt) {
    MetricReport rep;
    rep.dice = dice(pred, gt);
    rep.iou = iou(pred, gt);
    rep.pa = pixel_accuracy(pred, gt);
    rep.cl_dice = cl_dice(pred, gt);
    rep.voi = voi(pred, gt);
    const auto [b0, b1] = betti_error(pred, gt);
    rep.betti_error_dim0 = b0;
    rep.betti_error_dim1 = b1;
    return rep;
}

} // namespace toposeg
