#include <CLI11.hpp>
#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "hppseg/cli.hpp"

using hppseg::cli::resolve_threads;
using nlohmann::json;

namespace {

// Shared pipeline-config flags; collected into a JSON override object so the
// config file can be patched with exactly the flags the user passed.
struct ConfigFlags {
    std::optional<int> n_u, n_mask_components, window, stride, k, max_samples, pca_max_dim, threads;
    std::optional<double> sigma1_frac, sigma2_frac, fg_threshold, lambda, clip_percentile,
        alpha_motion_smooth, bbox_beta, bbox_bandwidth_frac;
    std::optional<std::uint64_t> seed;
    bool soft_color_weights = false;

    void attach(CLI::App* app) {
        app->add_option("--n-u", n_u, "frame-PCA components");
        app->add_option("--n-mask-components", n_mask_components, "mask-projection components");
        app->add_option("--sigma1-frac", sigma1_frac, "initial-cue smoothing fraction");
        app->add_option("--sigma2-frac", sigma2_frac, "projection smoothing fraction");
        app->add_option("--fg-threshold", fg_threshold, "foreground sampling threshold");
        app->add_option("--window", window, "patch window size");
        app->add_option("--stride", stride, "training grid stride");
        app->add_option("-k,--k", k, "number of selected colors");
        app->add_option("--lambda", lambda, "ridge regularization");
        app->add_option("--max-samples", max_samples, "training sample cap");
        app->add_option("--clip-percentile", clip_percentile, "normalization clip percentile");
        app->add_option("--alpha-motion-smooth", alpha_motion_smooth, "motion smoothing factor");
        app->add_option("--bbox-beta", bbox_beta, "box half-extent multiplier");
        app->add_option("--bbox-bandwidth-frac", bbox_bandwidth_frac, "mean-shift bandwidth fraction");
        app->add_option("--pca-max-dim", pca_max_dim, "max dimension for frame PCA");
        app->add_option("--seed", seed, "random seed");
        app->add_option("--threads", threads, "worker count (0 = all cores)");
        app->add_flag("--soft-color-weights", soft_color_weights, "fractional foreground counts");
    }

    json overrides() const {
        json j = json::object();
        if (n_u) j["n_u"] = *n_u;
        if (n_mask_components) j["n_mask_components"] = *n_mask_components;
        if (sigma1_frac) j["sigma1_frac"] = *sigma1_frac;
        if (sigma2_frac) j["sigma2_frac"] = *sigma2_frac;
        if (fg_threshold) j["fg_threshold"] = *fg_threshold;
        if (window) j["window"] = *window;
        if (stride) j["stride"] = *stride;
        if (k) j["k"] = *k;
        if (lambda) j["lambda"] = *lambda;
        if (max_samples) j["max_samples"] = *max_samples;
        if (clip_percentile) j["clip_percentile"] = *clip_percentile;
        if (alpha_motion_smooth) j["alpha_motion_smooth"] = *alpha_motion_smooth;
        if (bbox_beta) j["bbox_beta"] = *bbox_beta;
        if (bbox_bandwidth_frac) j["bbox_bandwidth_frac"] = *bbox_bandwidth_frac;
        if (pca_max_dim) j["pca_max_dim"] = *pca_max_dim;
        if (seed) j["seed"] = *seed;
        j["threads"] = resolve_threads(threads);
        if (soft_color_weights) j["soft_color_weights"] = true;
        return j;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unsupervised video foreground segmentation"};
    app.require_subcommand(1);

    // segment
    hppseg::cli::SegmentOptions seg;
    ConfigFlags seg_flags;
    CLI::App* segment = app.add_subcommand("segment", "run the pipeline on a frame directory");
    segment->add_option("-i,--input", seg.input_dir, "directory of numbered frames")->required();
    segment->add_option("-o,--output", seg.output_dir, "output run directory")->required();
    segment->add_option("-c,--config", seg.config_path, "JSON config file");
    segment->add_flag("--debug-stages", seg.debug_stages, "retain per-stage masks");
    segment->add_flag("--export-trimaps", seg.export_trimaps, "write trimap PNGs");
    segment->add_option("--trimap-lo", seg.trimap_lo, "trimap background threshold");
    segment->add_option("--trimap-hi", seg.trimap_hi, "trimap foreground threshold");
    seg_flags.attach(segment);

    // eval
    hppseg::cli::EvalOptions ev;
    CLI::App* eval = app.add_subcommand("eval", "score predictions against ground truth");
    eval->add_option("--pred-boxes", ev.pred_boxes, "predicted boxes.json");
    eval->add_option("--pred-masks", ev.pred_masks, "directory of predicted mask PNGs");
    eval->add_option("--gt-boxes", ev.gt_boxes, "ground-truth boxes (CSV or JSON)");
    eval->add_option("--gt-masks", ev.gt_masks, "directory of binary ground-truth PNGs");
    eval->add_option("--metric", ev.metric, "corloc | iou | prf")->required();
    eval->add_option("--threshold", ev.threshold, "IoU / binarization threshold");
    eval->add_option("--output", ev.output, "write the JSON report here too");

    // hpp-sim
    hppseg::cli::HppSimOptions sim;
    CLI::App* hppsim = app.add_subcommand("hpp-sim", "verify the HPP learning guarantee on random scenarios");
    hppsim->add_option("--scenarios", sim.scenarios, "number of scenarios");
    hppsim->add_option("--support", sim.support, "support size");
    hppsim->add_option("--seed", sim.seed, "random seed");
    hppsim->add_option("--output", sim.output, "write the JSON report here too");

    // bench
    hppseg::cli::BenchOptions bench;
    ConfigFlags bench_flags;
    CLI::App* bench_cmd = app.add_subcommand("bench", "time the pipeline stages");
    bench_cmd->add_option("-i,--input", bench.input_dir, "directory of numbered frames")->required();
    bench_cmd->add_option("-c,--config", bench.config_path, "JSON config file");
    bench_cmd->add_option("-r,--repetitions", bench.repetitions, "runs to take the median over");
    bench_cmd->add_option("--output", bench.output, "write the JSON report here too");
    bench_flags.attach(bench_cmd);

    // ksweep
    hppseg::cli::KsweepOptions sweep;
    ConfigFlags sweep_flags;
    CLI::App* ksweep = app.add_subcommand("ksweep", "selected-color-count sensitivity on a synthetic video");
    ksweep->add_option("--k-values", sweep.ks, "k values to sweep")->required()->delimiter(',');
    ksweep->add_option("--width", sweep.width, "synthetic frame width");
    ksweep->add_option("--height", sweep.height, "synthetic frame height");
    ksweep->add_option("--frames", sweep.frames, "synthetic frame count");
    ksweep->add_option("--output", sweep.output, "CSV output path");
    sweep_flags.attach(ksweep);

    CLI11_PARSE(app, argc, argv);

    if (segment->parsed()) {
        seg.overrides = seg_flags.overrides();
        return hppseg::cli::cmd_segment(seg);
    }
    if (eval->parsed()) return hppseg::cli::cmd_eval(ev);
    if (hppsim->parsed()) return hppseg::cli::cmd_hpp_sim(sim);
    if (bench_cmd->parsed()) {
        bench.overrides = bench_flags.overrides();
        return hppseg::cli::cmd_bench(bench);
    }
    if (ksweep->parsed()) {
        sweep.overrides = sweep_flags.overrides();
        if (sweep_flags.seed) sweep.seed = *sweep_flags.seed;
        return hppseg::cli::cmd_ksweep(sweep);
    }
    return 1;
}
