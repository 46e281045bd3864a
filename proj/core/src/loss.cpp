#include "toposeg/loss.hpp"

#include <cmath>

#include "toposeg/metrics.hpp"

namespace toposeg {

void validate(const LossConfig& cfg) {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
        throw ValidationError("loss config: alpha outside [0, 1]");
    if (cfg.padding_width != 0 && cfg.padding_width != 2)
        throw ValidationError("loss config: padding width must be 0 or 2");
    if (!(cfg.p >= 1.0))
        throw ValidationError("loss config: matching exponent must be >= 1");
    if (!cfg.use_dim0 && !cfg.use_dim1)
        throw ValidationError("loss config: at least one homology dimension required");
}

namespace {

bool dim_enabled(const LossConfig& cfg, int dim) {
    return (dim == 0 && cfg.use_dim0) || (dim == 1 && cfg.use_dim1);
}

// Accumulates d(loss)/d(coordinate) at the coordinate's critical pixel in
// padded coordinates; contributions on the frame are tallied separately and
// dropped when the gradient is cropped back to input size.
struct GradSink {
    RealGrid grid;
    int pad = 0;
    double discarded_l1 = 0.0;

    GradSink(int padded_w, int padded_h, int pad_width) : grid(padded_w, padded_h, 0.0), pad(pad_width) {}

    void add(int row, int col, double g) { grid.at(row, col) += g; }

    RealGrid crop() {
        const int w = grid.width() - 2 * pad;
        const int h = grid.height() - 2 * pad;
        RealGrid out(w, h, 0.0);
        for (int r = 0; r < grid.height(); ++r)
            for (int c = 0; c < grid.width(); ++c) {
                const bool inside = r >= pad && r < pad + h && c >= pad && c < pad + w;
                if (inside) out.at(r - pad, c - pad) = grid.at(r, c);
                else discarded_l1 += std::abs(grid.at(r, c));
            }
        return out;
    }
};

// Squared-distance term between a pred bar and a (finite) target location,
// with the factor applied; routes the subgradient to the pred bar's critical
// vertices.
double add_pair_term(GradSink& sink, const PersistencePair& p, double target_birth,
                     double target_death, double factor) {
    const double db = p.birth - target_birth;
    const double dd = p.death - target_death;
    sink.add(p.birth_row(), p.birth_col(), factor * 2.0 * db);
    sink.add(p.death_row(), p.death_col(), factor * 2.0 * dd);
    return factor * (db * db + dd * dd);
}

double add_diagonal_term(GradSink& sink, const PersistencePair& p, double factor) {
    const double mid = 0.5 * (p.birth + p.death);
    return add_pair_term(sink, p, mid, mid, factor);
}

LossGrad topo_loss(const LikelihoodMap& pred, const BinaryMask& gt, const LossConfig& cfg,
                   LossKind kind) {
    validate(cfg);
    if (!pred.same_shape(gt))
        throw ValidationError("loss: grid shapes differ");

    const int pad = cfg.padding_width;
    LikelihoodMap pp = pad > 0 ? pad_frame(pred, pad, 1.0) : pred;
    BinaryMask pg = pad > 0 ? pad_frame(gt, pad, std::uint8_t{1}) : gt;

    LossGrad out;
    GradSink sink(pp.width(), pp.height(), pad);

    if (kind == LossKind::Wasserstein) {
        const auto dir = FiltrationDirection::Superlevel;
        PersistenceDiagram dp = compute_persistence(CubicalFiltration::build(pp, dir));
        PersistenceDiagram dg =
            compute_persistence(CubicalFiltration::build(to_likelihood(pg), dir));

        // Restrict both diagrams to the configured dims before matching so
        // disabled dimensions cost nothing.
        PersistenceDiagram dpf, dgf;
        dpf.direction = dgf.direction = dir;
        for (const auto& q : dp.pairs)
            if (dim_enabled(cfg, q.dim)) dpf.pairs.push_back(q);
        for (const auto& q : dg.pairs)
            if (dim_enabled(cfg, q.dim)) dgf.pairs.push_back(q);

        WassersteinResult wm = wasserstein_matching(dpf, dgf, cfg.p);
        for (auto [pi, ti] : wm.matching.matched)
            out.topo_term += add_pair_term(sink, dpf.pairs[pi], dgf.pairs[ti].birth,
                                           dgf.pairs[ti].death, 1.0);
        for (int pi : wm.matching.pred_to_diagonal)
            out.topo_term += add_diagonal_term(sink, dpf.pairs[pi], 1.0);
        for (int ti : wm.matching.target_to_diagonal) {
            const double half_gap = 0.5 * (dgf.pairs[ti].birth - dgf.pairs[ti].death);
            out.topo_term += 2.0 * half_gap * half_gap;
        }
        out.n_matched = static_cast<int>(wm.matching.matched.size());
        out.n_diagonal = static_cast<int>(wm.matching.pred_to_diagonal.size() +
                                          wm.matching.target_to_diagonal.size());
    } else {
        BettiMatchingResult bm = betti_matching(pp, pg);
        for (auto [pi, ti] : bm.matching.matched) {
            const PersistencePair& qp = bm.pred_diagram.pairs[pi];
            const PersistencePair& qt = bm.target_diagram.pairs[ti];
            if (!dim_enabled(cfg, qp.dim)) continue;
            ++out.n_matched;
            if (qp.essential()) {
                // Both deaths are at the same infinite end; only the births
                // differ.
                const double db = qp.birth - qt.birth;
                sink.add(qp.birth_row(), qp.birth_col(), 2.0 * 2.0 * db);
                out.topo_term += 2.0 * db * db;
            } else {
                out.topo_term += add_pair_term(sink, qp, qt.birth, qt.death, 2.0);
            }
        }
        for (int pi : bm.matching.pred_to_diagonal) {
            const PersistencePair& qp = bm.pred_diagram.pairs[pi];
            if (!dim_enabled(cfg, qp.dim)) continue;
            ++out.n_diagonal;
            if (qp.essential())
                throw std::logic_error("betti loss: essential pred bar left unmatched");
            out.topo_term += add_diagonal_term(sink, qp, 2.0);
        }
        // Eq-6-style objective sums over pred bars only; unmatched target
        // bars are counted but cost nothing.
        for (int ti : bm.matching.target_to_diagonal)
            if (dim_enabled(cfg, bm.target_diagram.pairs[ti].dim)) ++out.n_diagonal;
    }

    out.grad = sink.crop();
    out.discarded_pad_grad_l1 = sink.discarded_l1;
    out.value = out.topo_term;
    return out;
}

} // namespace

LossGrad wasserstein_loss_grad(const LikelihoodMap& pred, const BinaryMask& gt,
                               const LossConfig& cfg) {
    if (cfg.kind != LossKind::Wasserstein)
        throw ValidationError("wasserstein_loss_grad: config selects a different loss kind");
    return topo_loss(pred, gt, cfg, LossKind::Wasserstein);
}

LossGrad betti_loss_grad(const LikelihoodMap& pred, const BinaryMask& gt, const LossConfig& cfg) {
    if (cfg.kind != LossKind::Betti)
        throw ValidationError("betti_loss_grad: config selects a different loss kind");
    return topo_loss(pred, gt, cfg, LossKind::Betti);
}

LossGrad combined_loss(const LikelihoodMap& pred, const BinaryMask& gt, const LossConfig& cfg) {
    validate(cfg);
    LossGrad dice = soft_dice_loss(pred, gt);
    if (cfg.alpha == 1.0) {
        dice.dice_term = dice.value;
        dice.topo_term = 0.0;
        return dice;
    }

    LossGrad topo = topo_loss(pred, gt, cfg, cfg.kind);
    LossGrad out;
    out.dice_term = dice.value;
    out.topo_term = topo.value;
    out.value = cfg.alpha * dice.value + (1.0 - cfg.alpha) * topo.value;
    out.n_matched = topo.n_matched;
    out.n_diagonal = topo.n_diagonal;
    out.discarded_pad_grad_l1 = topo.discarded_pad_grad_l1;
    out.grad = RealGrid(pred.width(), pred.height(), 0.0);
    for (int r = 0; r < pred.height(); ++r)
        for (int c = 0; c < pred.width(); ++c)
            out.grad.at(r, c) =
                cfg.alpha * dice.grad.at(r, c) + (1.0 - cfg.alpha) * topo.grad.at(r, c);
    return out;
}

} // namespace toposeg
