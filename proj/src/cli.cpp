#include "hppseg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "hppseg/colormodel.hpp"
#include "hppseg/eval.hpp"
#include "hppseg/filters.hpp"
#include "hppseg/hpp.hpp"
#include "hppseg/io.hpp"
#include "hppseg/parallel.hpp"
#include "hppseg/patchmodel.hpp"
#include "hppseg/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hppseg::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string frame_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04zu.png", i);
    return buf;
}

json boxes_to_json(const std::vector<BoundingBox>& boxes) {
    json arr = json::array();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        json flags = json::array();
        if (boxes[i].empty_flag) flags.push_back("empty");
        arr.push_back({{"frame", i},
                       {"x", boxes[i].x},
                       {"y", boxes[i].y},
                       {"w", boxes[i].w},
                       {"h", boxes[i].h},
                       {"flags", flags}});
    }
    return arr;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PipelineConfig config_from_json(const json& j, PipelineConfig base) {
    PipelineConfig cfg = base;
    for (const auto& [key, value] : j.items()) {
        if (key == "n_u") cfg.n_u = value.get<int>();
        else if (key == "n_mask_components") cfg.n_mask_components = value.get<int>();
        else if (key == "sigma1_frac") cfg.sigma1_frac = value.get<double>();
        else if (key == "sigma2_frac") cfg.sigma2_frac = value.get<double>();
        else if (key == "fg_threshold") cfg.fg_threshold = value.get<double>();
        else if (key == "window") cfg.window = value.get<int>();
        else if (key == "stride") cfg.stride = value.get<int>();
        else if (key == "k") cfg.k = value.get<int>();
        else if (key == "lambda") cfg.lambda = value.get<double>();
        else if (key == "max_samples") cfg.max_samples = value.get<int>();
        else if (key == "clip_percentile") cfg.clip_percentile = value.get<double>();
        else if (key == "alpha_motion_smooth") cfg.alpha_motion_smooth = value.get<double>();
        else if (key == "bbox_beta") cfg.bbox_beta = value.get<double>();
        else if (key == "bbox_bandwidth_frac") cfg.bbox_bandwidth_frac = value.get<double>();
        else if (key == "pca_max_dim") cfg.pca_max_dim = value.get<int>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "threads") cfg.threads = value.get<int>();
        else if (key == "soft_color_weights") cfg.soft_color_weights = value.get<bool>();
        else throw std::invalid_argument("unknown config key: " + key);
    }
    return cfg;
}

json config_to_json(const PipelineConfig& cfg) {
    return json{{"n_u", cfg.n_u},
                {"n_mask_components", cfg.n_mask_components},
                {"sigma1_frac", cfg.sigma1_frac},
                {"sigma2_frac", cfg.sigma2_frac},
                {"fg_threshold", cfg.fg_threshold},
                {"window", cfg.window},
                {"stride", cfg.stride},
                {"k", cfg.k},
                {"lambda", cfg.lambda},
                {"max_samples", cfg.max_samples},
                {"clip_percentile", cfg.clip_percentile},
                {"alpha_motion_smooth", cfg.alpha_motion_smooth},
                {"bbox_beta", cfg.bbox_beta},
                {"bbox_bandwidth_frac", cfg.bbox_bandwidth_frac},
                {"pca_max_dim", cfg.pca_max_dim},
                {"seed", cfg.seed},
                {"threads", cfg.threads},
                {"soft_color_weights", cfg.soft_color_weights}};
}

PipelineConfig load_config(const std::string& path, const json& overrides) {
    PipelineConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read config: " + path);
        json j;
        in >> j;
        cfg = config_from_json(j, cfg);
    }
    if (!overrides.is_null()) cfg = config_from_json(overrides, cfg);
    return cfg;
}

int resolve_threads(std::optional<int> flag) {
    if (flag.has_value()) return *flag;
    if (const char* env = std::getenv("HPPSEG_THREADS")) {
        try {
            return std::stoi(env);
        } catch (...) {
            std::cerr << "warning: ignoring invalid HPPSEG_THREADS=" << env << "\n";
        }
    }
    return 0;
}

BinaryMask binarize_normalized(const SoftMask& mask, double clip_percentile) {
    return binarize(normalize_unit(mask, clip_percentile), 0.5);
}

std::string hardware_string() {
    std::string model = "unknown cpu";
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto pos = line.find(':');
            if (pos != std::string::npos) model = line.substr(pos + 2);
            break;
        }
    }
    return model + ", " + std::to_string(hardware_threads()) + " threads";
}

int cmd_segment(const SegmentOptions& opt) {
    try {
        const PipelineConfig cfg = [&] {
            PipelineConfig c = load_config(opt.config_path, opt.overrides);
            c.keep_stage_masks = opt.debug_stages;
            return c;
        }();
        const FrameSequence video = io::load_frame_dir(opt.input_dir);

        const auto t_start = std::chrono::steady_clock::now();
        const PipelineResult result = run_pipeline(video, cfg);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

        if (result.degenerate_color) {
            std::cerr << "warning: degenerate foreground/background labeling; "
                         "color model relies on smoothing\n";
        }
        if (result.degenerate_motion) {
            std::cerr << "warning: degenerate motion fit on some frames; "
                         "fell back to appearance-only masks\n";
        }

        fs::create_directories(fs::path(opt.output_dir) / "masks");
        for (std::size_t i = 0; i < result.masks.size(); ++i) {
            io::save_mask_png((fs::path(opt.output_dir) / "masks" / frame_name(i)).string(),
                              result.masks[i]);
        }
        write_text((fs::path(opt.output_dir) / "boxes.json").string(),
                   boxes_to_json(result.boxes).dump(2) + "\n");

        json timings = json::object();
        for (const auto& [stage, sec] : result.seconds_per_frame) timings[stage] = sec;
        timings["total"] = wall / static_cast<double>(video.size());
        write_text((fs::path(opt.output_dir) / "timings.json").string(), timings.dump(2) + "\n");

        if (opt.debug_stages) {
            const char* names[6] = {"p1", "s1", "p2", "s2", "s3", "m"};
            for (const char* name : names) {
                fs::create_directories(fs::path(opt.output_dir) / "stages" / name);
            }
            for (std::size_t i = 0; i < result.stages.size(); ++i) {
                const StageMasks& st = result.stages[i];
                const SoftMask* masks[6] = {&st.p1, &st.s1, &st.p2, &st.s2, &st.s3, &st.m};
                for (int s = 0; s < 6; ++s) {
                    io::save_mask_png(
                        (fs::path(opt.output_dir) / "stages" / names[s] / frame_name(i)).string(),
                        *masks[s]);
                }
            }
        }
        if (opt.export_trimaps) {
            fs::create_directories(fs::path(opt.output_dir) / "trimaps");
            for (std::size_t i = 0; i < result.masks.size(); ++i) {
                const Trimap t = export_trimap(result.masks[i], opt.trimap_lo, opt.trimap_hi);
                io::save_trimap_png((fs::path(opt.output_dir) / "trimaps" / frame_name(i)).string(), t);
            }
        }

        json manifest{{"version", kVersion},
                      {"input", opt.input_dir},
                      {"output", opt.output_dir},
                      {"frames", video.size()},
                      {"seed", cfg.seed},
                      {"config", config_to_json(cfg)},
                      {"stage_seconds_per_frame", timings},
                      {"hardware", hardware_string()}};
        write_text((fs::path(opt.output_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "segment: " << e.what() << "\n";
        return 1;
    }
}

std::map<int, BoundingBox> load_pred_boxes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;
    std::map<int, BoundingBox> out;
    for (const json& e : j) {
        BoundingBox b{e.at("x").get<int>(), e.at("y").get<int>(), e.at("w").get<int>(),
                      e.at("h").get<int>(), false};
        if (e.contains("flags")) {
            for (const json& f : e["flags"]) {
                if (f.get<std::string>() == "empty") b.empty_flag = true;
            }
        }
        out[e.at("frame").get<int>()] = b;
    }
    return out;
}

GroundTruth load_gt_boxes(const std::string& path) {
    GroundTruth gt;
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".json") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read " + path);
        json j;
        in >> j;
        for (const json& e : j) {
            gt.boxes[e.at("frame").get<int>()].push_back(BoundingBox{
                e.at("x").get<int>(), e.at("y").get<int>(), e.at("w").get<int>(),
                e.at("h").get<int>(), false});
        }
        return gt;
    }
    // CSV: frame,x,y,w,h (header line allowed)
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        int frame, x, y, w, h;
        if (ss >> frame >> x >> y >> w >> h) {
            gt.boxes[frame].push_back(BoundingBox{x, y, w, h, false});
        }
    }
    if (gt.boxes.empty()) throw std::runtime_error("no boxes parsed from " + path);
    return gt;
}

int cmd_eval(const EvalOptions& opt) {
    try {
        json report{{"metric", opt.metric}, {"threshold", opt.threshold}};
        if (opt.metric == "corloc") {
            if (opt.pred_boxes.empty() || opt.gt_boxes.empty()) {
                throw std::invalid_argument("corloc needs --pred-boxes and --gt-boxes");
            }
            const auto pred = load_pred_boxes(opt.pred_boxes);
            const GroundTruth gt = load_gt_boxes(opt.gt_boxes);
            report["corloc"] = corloc(pred, gt, opt.threshold);
            report["annotated_frames"] = gt.boxes.size();
        } else if (opt.metric == "iou" || opt.metric == "prf") {
            if (opt.pred_masks.empty() || opt.gt_masks.empty()) {
                throw std::invalid_argument(opt.metric + " needs --pred-masks and --gt-masks");
            }
            const auto pred_files = io::list_frame_files(opt.pred_masks);
            const auto gt_files = io::list_frame_files(opt.gt_masks);
            if (pred_files.size() != gt_files.size() || pred_files.empty()) {
                throw std::runtime_error("prediction/ground-truth frame counts differ");
            }
            std::vector<BinaryMask> pred, gt;
            for (std::size_t i = 0; i < pred_files.size(); ++i) {
                pred.push_back(binarize(io::load_mask_png(pred_files[i]), opt.threshold));
                gt.push_back(io::load_binary_mask(gt_files[i]));
            }
            if (opt.metric == "iou") {
                report["average_iou"] = average_iou(pred, gt);
            } else {
                double p = 0, r = 0, f = 0;
                for (std::size_t i = 0; i < pred.size(); ++i) {
                    const Prf m = prf(pred[i], gt[i]);
                    p += m.precision;
                    r += m.recall;
                    f += m.f_measure;
                }
                const double n = static_cast<double>(pred.size());
                report["precision"] = p / n;
                report["recall"] = r / n;
                report["f_measure"] = f / n;
            }
            report["frames"] = pred.size();
        } else {
            throw std::invalid_argument("unknown metric: " + opt.metric);
        }
        const std::string text = report.dump(2) + "\n";
        std::cout << text;
        if (!opt.output.empty()) write_text(opt.output, text);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "eval: " << e.what() << "\n";
        return 1;
    }
}

int cmd_hpp_sim(const HppSimOptions& opt) {
    try {
        if (opt.scenarios < 1 || opt.support < 2) {
            throw std::invalid_argument("need at least 1 scenario and support >= 2");
        }
        std::mt19937_64 rng(opt.seed);
        int holds = 0;
        json details = json::array();
        for (int i = 0; i < opt.scenarios; ++i) {
            const hpp::Scenario s = hpp::random_scenario(rng, opt.support);
            const hpp::PropositionResult r = hpp::verify_proposition(s);
            if (r.holds) {
                ++holds;
            } else {
                details.push_back({{"scenario", i},
                                   {"counterexamples", r.counterexamples},
                                   {"prior_pos", s.prior_pos},
                                   {"q", s.q},
                                   {"sel_prob_pos", s.sel_prob_pos},
                                   {"sel_mass", s.sel_mass}});
            }
        }
        const json report{{"scenarios", opt.scenarios},
                          {"support_size", opt.support},
                          {"seed", opt.seed},
                          {"holds_count", holds},
                          {"counterexample_details", details}};
        const std::string text = report.dump(2) + "\n";
        std::cout << text;
        if (!opt.output.empty()) write_text(opt.output, text);
        return holds == opt.scenarios ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "hpp-sim: " << e.what() << "\n";
        return 1;
    }
}

BenchReport run_bench(const BenchOptions& opt) {
    if (opt.repetitions < 1) throw std::invalid_argument("need at least 1 repetition");
    const PipelineConfig cfg = load_config(opt.config_path, opt.overrides);
    const FrameSequence video = io::load_frame_dir(opt.input_dir);

    BenchReport report;
    report.frames = static_cast<int>(video.size());
    std::map<std::string, std::vector<double>> samples;
    for (int rep = 0; rep < opt.repetitions; ++rep) {
        const PipelineResult result = run_pipeline(video, cfg);
        report.runs.push_back(result.seconds_per_frame);
        for (const auto& [stage, sec] : result.seconds_per_frame) samples[stage].push_back(sec);
    }
    for (const auto& [stage, values] : samples) {
        report.median_seconds_per_frame[stage] = median(values);
        report.total_seconds_per_frame += report.median_seconds_per_frame[stage];
    }
    return report;
}

int cmd_bench(const BenchOptions& opt) {
    try {
        const BenchReport report = run_bench(opt);
        json j{{"frames", report.frames},
               {"repetitions", opt.repetitions},
               {"hardware", hardware_string()},
               {"stages_seconds_per_frame", report.median_seconds_per_frame},
               {"total_seconds_per_frame", report.total_seconds_per_frame},
               {"runs", report.runs}};
        const std::string text = j.dump(2) + "\n";
        std::cout << text;
        if (!opt.output.empty()) write_text(opt.output, text);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return 1;
    }
}

std::vector<KsweepRow> run_ksweep(const KsweepOptions& opt) {
    if (opt.ks.empty()) throw std::invalid_argument("ksweep needs at least one k");
    for (int k : opt.ks) {
        if (k < 1 || k > kColorCount) throw std::invalid_argument("k out of range: " + std::to_string(k));
    }
    synthetic::MovingSquareParams params;
    params.width = opt.width;
    params.height = opt.height;
    params.n_frames = opt.frames;
    params.seed = opt.seed;
    const synthetic::MovingSquareVideo data = synthetic::make_moving_square(params);

    PipelineConfig cfg = load_config("", opt.overrides);
    cfg.seed = opt.seed;
    cfg.keep_stage_masks = true;
    const PipelineResult base = run_pipeline(data.video, cfg);

    // Steps 1-4 are shared; each k re-runs selection, ridge, and the dense
    // patch-level evaluation (the O(k) part being measured).
    const int n = static_cast<int>(data.video.size());
    std::vector<QuantizedFrame> quantized(n);
    parallel_for(n, cfg.threads,
                 [&](int i) { quantized[i] = quantize_frame(data.video.frames[i]); });
    std::vector<SoftMask> s2(n);
    for (int i = 0; i < n; ++i) s2[i] = base.stages[i].s2;
    const TrainingSet training =
        build_training_set(quantized, s2, cfg.stride, cfg.window, cfg.max_samples, cfg.seed);
    const Eigen::MatrixXd covariance = color_covariance(training);

    std::vector<KsweepRow> rows;
    for (int k : opt.ks) {
        const SelectionMask selection = select_features(covariance, k, 100, 8, cfg.seed);
        const RegressionModel model = train_regression(
            selected_design_matrix(training, selection), training.labels, cfg.lambda, selection);

        std::vector<SoftMask> s3(n);
        const auto t0 = std::chrono::steady_clock::now();
        parallel_for(n, cfg.threads,
                     [&](int i) { s3[i] = evaluate_dense(quantized[i], model, cfg.window); });
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / n;

        double f = 0.0;
        for (int i = 0; i < n; ++i) {
            f += prf(binarize_normalized(s3[i], cfg.clip_percentile), data.gt_masks[i]).f_measure;
        }
        rows.push_back({k, f / n, secs});
    }
    return rows;
}

int cmd_ksweep(const KsweepOptions& opt) {
    try {
        const std::vector<KsweepRow> rows = run_ksweep(opt);
        std::ostringstream csv;
        csv << "k,f_measure,seconds_per_frame\n";
        for (const KsweepRow& r : rows) {
            csv << r.k << "," << r.f_measure << "," << r.seconds_per_frame << "\n";
        }
        std::cout << csv.str();
        if (!opt.output.empty()) write_text(opt.output, csv.str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "ksweep: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hppseg::cli
