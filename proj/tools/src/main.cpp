#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "common.hpp"
#include "oracle_suites.hpp"
#include "toposeg/cubical.hpp"
#include "toposeg/distance.hpp"
#include "toposeg/error.hpp"
#include "toposeg/fixtures.hpp"
#include "toposeg/grid.hpp"
#include "toposeg/image_io.hpp"
#include "toposeg/loss.hpp"
#include "toposeg/metrics.hpp"
#include "toposeg/persistence.hpp"
#include "toposeg/refine.hpp"

#ifndef TOPOSEG_VERSION
#define TOPOSEG_VERSION "0.0.0"
#endif

namespace toposeg::cli {
namespace {

FiltrationDirection parse_direction(const std::string& name) {
    if (name == "sublevel") return FiltrationDirection::Sublevel;
    if (name == "superlevel") return FiltrationDirection::Superlevel;
    throw ValidationError("unknown direction: " + name);
}

LossKind parse_loss_kind(const std::string& name) {
    if (name == "wm") return LossKind::Wasserstein;
    if (name == "bm") return LossKind::Betti;
    throw ValidationError("unknown loss kind: " + name + " (expected wm|bm)");
}

void apply_dims(LossConfig& cfg, const std::string& dims) {
    cfg.use_dim0 = dims == "0" || dims == "0,1";
    cfg.use_dim1 = dims == "1" || dims == "0,1";
    if (!cfg.use_dim0 && !cfg.use_dim1)
        throw ValidationError("unknown dims: " + dims + " (expected 0|1|0,1)");
}

double grad_l1(const RealGrid& grad) {
    double sum = 0.0;
    for (double v : grad.data()) sum += std::abs(v);
    return sum;
}

// ---- sdf ----------------------------------------------------------------

struct SdfArgs {
    std::string input, output, png;
};

int run_sdf(const SdfArgs& args) {
    const auto mask = load_mask(args.input);
    const auto field = sdf(mask);
    write_sdf(args.output, field);

    double lo = field.at(0, 0), hi = field.at(0, 0);
    for (double v : field.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!args.png.empty()) {
        // Visualization only: linear rescale of [min, max] onto 0..255.
        Image2D viz(field.width(), field.height());
        const double span = hi > lo ? hi - lo : 1.0;
        for (int r = 0; r < field.height(); ++r)
            for (int c = 0; c < field.width(); ++c)
                viz.at(r, c) = std::round((field.at(r, c) - lo) / span * 255.0);
        save_grayscale(args.png, viz);
    }

    ManifestBuilder mb;
    mb.subcommand = "sdf";
    mb.inputs = {args.input};
    mb.config["output"] = args.output;
    if (!args.png.empty()) mb.config["png"] = args.png;
    Json out;
    out["manifest"] = mb.build();
    out["width"] = field.width();
    out["height"] = field.height();
    out["min"] = round9(lo);
    out["max"] = round9(hi);
    print_json(out);
    return 0;
}

// ---- diagram ------------------------------------------------------------

struct DiagramArgs {
    std::string input, output, direction = "superlevel";
    bool likelihood = false;
};

int run_diagram(const DiagramArgs& args) {
    const auto dir = parse_direction(args.direction);
    Grid<double> image = args.likelihood ? static_cast<Grid<double>>(load_likelihood(args.input))
                                         : static_cast<Grid<double>>(load_grayscale(args.input));
    const auto filt = CubicalFiltration::build(image, dir);
    const auto diagram = compute_persistence(filt);
    const auto csv = diagram_to_csv(diagram);

    if (args.output.empty()) {
        std::fputs(csv.c_str(), stdout);
        return 0;
    }
    write_text_file(args.output, csv);

    ManifestBuilder mb;
    mb.subcommand = "diagram";
    mb.inputs = {args.input};
    mb.config["direction"] = args.direction;
    mb.config["likelihood"] = args.likelihood;
    mb.config["output"] = args.output;
    Json out;
    out["manifest"] = mb.build();
    out["pairs"] = diagram.pairs.size();
    Json by_dim = Json::object();
    by_dim["0"] = diagram.indices_of_dim(0).size();
    by_dim["1"] = diagram.indices_of_dim(1).size();
    out["pairs_by_dim"] = by_dim;
    print_json(out);
    return 0;
}

// ---- loss ---------------------------------------------------------------

struct LossArgs {
    std::string pred, gt, kind = "wm", dims = "0,1", grad_out;
    double alpha = 0.9;
    int pad = 2;
};

int run_loss(const LossArgs& args) {
    const auto pred = load_likelihood(args.pred);
    const auto gt = load_mask(args.gt);
    LossConfig cfg;
    cfg.kind = parse_loss_kind(args.kind);
    cfg.alpha = args.alpha;
    cfg.padding_width = args.pad;
    apply_dims(cfg, args.dims);
    validate(cfg);

    const auto lg = combined_loss(pred, gt, cfg);
    if (!args.grad_out.empty()) write_sdf(args.grad_out, lg.grad);

    ManifestBuilder mb;
    mb.subcommand = "loss";
    mb.inputs = {args.pred, args.gt};
    mb.config["kind"] = args.kind;
    mb.config["alpha"] = round9(args.alpha);
    mb.config["pad"] = args.pad;
    mb.config["dims"] = args.dims;
    if (!args.grad_out.empty()) mb.config["grad_out"] = args.grad_out;
    Json out;
    out["manifest"] = mb.build();
    out["value"] = round9(lg.value);
    out["dice_term"] = round9(lg.dice_term);
    out["topo_term"] = round9(lg.topo_term);
    out["grad_l1_norm"] = round9(grad_l1(lg.grad));
    out["n_matched"] = lg.n_matched;
    out["n_diagonal"] = lg.n_diagonal;
    out["discarded_pad_grad_l1"] = round9(lg.discarded_pad_grad_l1);
    print_json(out);
    return 0;
}

// ---- metrics ------------------------------------------------------------

struct MetricsArgs {
    std::string pred, gt;
    bool csv = false;
};

int run_metrics(const MetricsArgs& args) {
    const auto pred = load_mask(args.pred);
    const auto gt = load_mask(args.gt);
    const auto report = compute_metrics(pred, gt);

    if (args.csv) {
        std::printf("dice,iou,pixel_accuracy,cl_dice,voi,betti_error_dim0,betti_error_dim1\n");
        std::printf("%s,%s,%s,%s,%s,%lld,%lld\n", fmt9(report.dice).c_str(), fmt9(report.iou).c_str(),
                    fmt9(report.pa).c_str(), fmt9(report.cl_dice).c_str(), fmt9(report.voi).c_str(),
                    static_cast<long long>(report.betti_error_dim0),
                    static_cast<long long>(report.betti_error_dim1));
        return 0;
    }

    ManifestBuilder mb;
    mb.subcommand = "metrics";
    mb.inputs = {args.pred, args.gt};
    Json out;
    out["manifest"] = mb.build();
    out["dice"] = round9(report.dice);
    out["iou"] = round9(report.iou);
    out["pixel_accuracy"] = round9(report.pa);
    out["cl_dice"] = round9(report.cl_dice);
    out["voi"] = round9(report.voi);
    out["betti_error_dim0"] = report.betti_error_dim0;
    out["betti_error_dim1"] = report.betti_error_dim1;
    print_json(out);
    return 0;
}

// ---- refine -------------------------------------------------------------

struct RefineArgs {
    std::string noisy, gt, loss = "wm", warm = "sdf", mask_out, trace_out, summary_out;
    double alpha = 0.9, lr = 0.1;
    int iters1 = 200, iters2 = 100, pad = 2;
    std::uint64_t seed = 0;
    bool compare = false;
};

std::string trace_to_csv(const RefineTrace& trace) {
    std::string csv = "iter,loss,dice,betti0_err,betti1_err\n";
    for (const auto& rec : trace.records) {
        csv += std::to_string(rec.iter) + "," + fmt9(rec.loss) + "," + fmt9(rec.dice) + "," +
               std::to_string(rec.betti0_err) + "," + std::to_string(rec.betti1_err) + "\n";
    }
    return csv;
}

// Inserts a tag before the extension: trace.csv + warm -> trace.warm.csv.
std::string tagged_path(const std::string& path, const std::string& tag) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + tag;
    return path.substr(0, dot) + "." + tag + path.substr(dot);
}

Json trace_summary(const RefineTrace& trace, const BinaryMask& gt) {
    const auto final_mask = binarize(trace.likelihood, 0.5);
    std::int64_t first_zero = -1;
    for (const auto& rec : trace.records)
        if (rec.betti0_err == 0 && rec.betti1_err == 0) {
            first_zero = rec.iter;
            break;
        }
    Json j;
    j["records"] = trace.records.size();
    j["final_loss"] = trace.records.empty() ? 0.0 : round9(trace.records.back().loss);
    j["final_dice"] = round9(dice(final_mask, gt));
    const auto betti = component_betti(final_mask);
    j["final_beta0"] = betti.beta0;
    j["final_beta1"] = betti.beta1;
    j["first_zero_betti_iter"] = first_zero;
    j["adapter_scale"] = round9(trace.params.scale);
    j["adapter_bias"] = round9(trace.params.bias);
    return j;
}

int run_refine(const RefineArgs& args) {
    const auto noisy = load_mask(args.noisy);
    const auto gt = load_mask(args.gt);

    RefineConfig cfg;
    cfg.learning_rate = args.lr;
    cfg.stage1_iters = args.iters1;
    cfg.stage2_iters = args.iters2;
    cfg.seed = args.seed;
    cfg.warm_start = args.warm == "cold" ? WarmStart::Cold : WarmStart::Sdf;
    if (args.warm != "cold" && args.warm != "sdf")
        throw ValidationError("unknown warm-start mode: " + args.warm + " (expected sdf|cold)");
    cfg.loss.kind = parse_loss_kind(args.loss);
    cfg.loss.alpha = args.alpha;
    cfg.loss.padding_width = args.pad;
    validate(cfg.loss);

    ManifestBuilder mb;
    mb.subcommand = "refine";
    mb.inputs = {args.noisy, args.gt};
    mb.config["loss"] = args.loss;
    mb.config["alpha"] = round9(args.alpha);
    mb.config["warm"] = args.warm;
    mb.config["iters1"] = args.iters1;
    mb.config["iters2"] = args.iters2;
    mb.config["lr"] = round9(args.lr);
    mb.config["pad"] = args.pad;
    mb.config["compare"] = args.compare;
    mb.seed = args.seed;

    Json out;
    out["manifest"] = mb.build();

    if (args.compare) {
        const auto report = two_stage_comparison(noisy, gt, cfg);
        Json warm = trace_summary(report.warm, gt);
        warm["iters_to_zero_betti"] = report.warm_iters_to_zero_betti;
        Json cold = trace_summary(report.cold, gt);
        cold["iters_to_zero_betti"] = report.cold_iters_to_zero_betti;
        out["warm"] = warm;
        out["cold"] = cold;
        if (!args.mask_out.empty()) {
            save_mask(tagged_path(args.mask_out, "warm"), binarize(report.warm.likelihood, 0.5));
            save_mask(tagged_path(args.mask_out, "cold"), binarize(report.cold.likelihood, 0.5));
        }
        if (!args.trace_out.empty()) {
            write_text_file(tagged_path(args.trace_out, "warm"), trace_to_csv(report.warm));
            write_text_file(tagged_path(args.trace_out, "cold"), trace_to_csv(report.cold));
        }
    } else {
        const auto trace = two_stage_run(noisy, gt, cfg);
        out["result"] = trace_summary(trace, gt);
        if (!args.mask_out.empty()) save_mask(args.mask_out, binarize(trace.likelihood, 0.5));
        if (!args.trace_out.empty()) write_text_file(args.trace_out, trace_to_csv(trace));
    }

    if (!args.summary_out.empty()) write_text_file(args.summary_out, out.dump(2) + "\n");
    print_json(out);
    return 0;
}

// ---- oracle -------------------------------------------------------------

struct OracleArgs {
    std::string suite = "all";
    int n = 50, size = 6;
    std::uint64_t seed = 7;
};

int run_oracle(const OracleArgs& args) {
    if (args.n < 1) throw ValidationError("--n must be positive");
    if (args.size < 3) throw ValidationError("--size must be at least 3");
    const bool ok = run_oracle_suite(args.suite, args.n, args.size, args.seed);
    std::printf("%s suite=%s n=%d size=%d seed=%llu\n", ok ? "PASS" : "FAIL", args.suite.c_str(),
                args.n, args.size, static_cast<unsigned long long>(args.seed));
    return ok ? 0 : 1;
}

// ---- gen ----------------------------------------------------------------

struct GenArgs {
    std::string kind = "ring", output;
    int size = 32;
    std::uint64_t seed = 0;
};

int run_gen(const GenArgs& args) {
    const auto kind = fixture_kind_from_string(args.kind);
    const auto mask = gen_fixture(kind, args.size, args.seed);
    save_mask(args.output, mask);

    std::int64_t foreground = 0;
    for (auto v : mask.data()) foreground += v ? 1 : 0;
    const auto betti = component_betti(mask);

    ManifestBuilder mb;
    mb.subcommand = "gen";
    mb.inputs = {};
    mb.config["kind"] = args.kind;
    mb.config["size"] = args.size;
    mb.config["output"] = args.output;
    mb.seed = args.seed;
    Json out;
    out["manifest"] = mb.build();
    out["beta0"] = betti.beta0;
    out["beta1"] = betti.beta1;
    out["foreground_pixels"] = foreground;
    print_json(out);
    return 0;
}

} // namespace
} // namespace toposeg::cli

int main(int argc, char** argv) {
    using namespace toposeg::cli;

    CLI::App app{"Topology-aware mask refinement toolkit"};
    app.set_version_flag("--version", TOPOSEG_VERSION);
    app.require_subcommand(1);

    SdfArgs sdf_args;
    auto* sdf_cmd = app.add_subcommand("sdf", "Signed distance field of a binary mask");
    sdf_cmd->add_option("mask", sdf_args.input, "Input mask image (PNG/PGM)")->required();
    sdf_cmd->add_option("-o,--output", sdf_args.output, "Output field file (SDF1 raw float)")
        ->required();
    sdf_cmd->add_option("--png", sdf_args.png,
                        "Optional PNG visualization (linear rescale, visualization only)");

    DiagramArgs diagram_args;
    auto* diagram_cmd = app.add_subcommand("diagram", "Persistence diagram of an image");
    diagram_cmd->add_option("image", diagram_args.input, "Input grayscale image")->required();
    diagram_cmd->add_option("-o,--output", diagram_args.output,
                            "Output CSV path (prints CSV to stdout when omitted)");
    diagram_cmd
        ->add_option("--direction", diagram_args.direction, "Filtration direction (default superlevel)")
        ->check(CLI::IsMember({"sublevel", "superlevel"}));
    diagram_cmd->add_flag("--likelihood", diagram_args.likelihood,
                          "Scale pixel values into [0,1] before filtering");

    LossArgs loss_args;
    auto* loss_cmd = app.add_subcommand("loss", "Combined Dice + topological loss and gradient");
    loss_cmd->add_option("pred", loss_args.pred, "Predicted likelihood image")->required();
    loss_cmd->add_option("gt", loss_args.gt, "Ground-truth mask image")->required();
    loss_cmd->add_option("--kind", loss_args.kind, "Topological term: wm|bm (default wm)")
        ->check(CLI::IsMember({"wm", "bm"}));
    loss_cmd->add_option("--alpha", loss_args.alpha, "Dice weight in [0,1] (default 0.9)");
    loss_cmd->add_option("--pad", loss_args.pad, "Foreground frame width (default 2)");
    loss_cmd->add_option("--dims", loss_args.dims, "Homology dimensions: 0|1|0,1 (default 0,1)");
    loss_cmd->add_option("--grad-out", loss_args.grad_out,
                         "Write the gradient as an SDF1 raw float file");

    MetricsArgs metrics_args;
    auto* metrics_cmd = app.add_subcommand("metrics", "Segmentation metrics for a mask pair");
    metrics_cmd->add_option("pred", metrics_args.pred, "Predicted mask image")->required();
    metrics_cmd->add_option("gt", metrics_args.gt, "Ground-truth mask image")->required();
    metrics_cmd->add_flag(
        "--csv", metrics_args.csv,
        "Emit a CSV row: dice,iou,pixel_accuracy,cl_dice,voi,betti_error_dim0,betti_error_dim1");

    RefineArgs refine_args;
    auto* refine_cmd =
        app.add_subcommand("refine", "Two-stage refinement: SDF warm start, then topology fine-tune");
    refine_cmd->add_option("noisy", refine_args.noisy, "Noisy input mask image")->required();
    refine_cmd->add_option("gt", refine_args.gt, "Ground-truth mask image")->required();
    refine_cmd->add_option("--loss", refine_args.loss, "Topological term: wm|bm (default wm)")
        ->check(CLI::IsMember({"wm", "bm"}));
    refine_cmd->add_option("--alpha", refine_args.alpha, "Dice weight (default 0.9)");
    refine_cmd->add_option("--warm", refine_args.warm, "Warm start mode: sdf|cold (default sdf)")
        ->check(CLI::IsMember({"sdf", "cold"}));
    refine_cmd->add_option("--iters1", refine_args.iters1, "Stage-1 iterations (default 200)");
    refine_cmd->add_option("--iters2", refine_args.iters2, "Stage-2 iterations (default 100)");
    refine_cmd->add_option("--lr", refine_args.lr, "Learning rate (default 0.1)");
    refine_cmd->add_option("--pad", refine_args.pad, "Foreground frame width (default 2)");
    refine_cmd->add_option("--seed", refine_args.seed, "Run seed recorded in the manifest");
    refine_cmd->add_flag("--compare", refine_args.compare,
                         "Run both warm-start modes and emit a comparison report");
    refine_cmd->add_option("-o,--mask-out", refine_args.mask_out, "Final binarized mask image");
    refine_cmd->add_option("--trace", refine_args.trace_out,
                           "Trace CSV (iter,loss,dice,betti0_err,betti1_err)");
    refine_cmd->add_option("--summary", refine_args.summary_out, "Write the summary JSON to a file");

    OracleArgs oracle_args;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "Validate the engine against brute-force reference implementations");
    oracle_cmd
        ->add_option("--suite", oracle_args.suite,
                     "persistence|edt|wasserstein|matching|gradient|all (default all)")
        ->check(CLI::IsMember({"persistence", "edt", "wasserstein", "matching", "gradient", "all"}));
    oracle_cmd->add_option("--n", oracle_args.n, "Random cases per check (default 50)");
    oracle_cmd->add_option("--size", oracle_args.size, "Instance side length (default 6)");
    oracle_cmd->add_option("--seed", oracle_args.seed, "Generator seed (default 7)");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic fixture mask");
    gen_cmd
        ->add_option("--kind", gen_args.kind,
                     "ring|broken-ring|line|broken-line|grid|random-blobs (default ring)")
        ->check(CLI::IsMember({"ring", "broken-ring", "line", "broken-line", "grid", "random-blobs"}));
    gen_cmd->add_option("--size", gen_args.size, "Side length, at least 8 (default 32)");
    gen_cmd->add_option("--seed", gen_args.seed, "Seed for random-blobs (default 0)");
    gen_cmd->add_option("-o,--output", gen_args.output, "Output mask image")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (sdf_cmd->parsed()) return run_sdf(sdf_args);
        if (diagram_cmd->parsed()) return run_diagram(diagram_args);
        if (loss_cmd->parsed()) return run_loss(loss_args);
        if (metrics_cmd->parsed()) return run_metrics(metrics_args);
        if (refine_cmd->parsed()) return run_refine(refine_args);
        if (oracle_cmd->parsed()) return run_oracle(oracle_args);
        if (gen_cmd->parsed()) return run_gen(gen_args);
    } catch (const toposeg::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const toposeg::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
