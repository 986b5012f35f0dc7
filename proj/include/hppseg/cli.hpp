#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hppseg/pipeline.hpp"

namespace hppseg::cli {

// Flat key-value config file; unknown keys are rejected. Flag overrides win.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});
nlohmann::json config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::string& path, const nlohmann::json& overrides);

// --threads flag, HPPSEG_THREADS env fallback, else all cores (0).
int resolve_threads(std::optional<int> flag);

struct SegmentOptions {
    std::string input_dir;
    std::string output_dir;
    std::string config_path;          // optional
    nlohmann::json overrides;         // flag overrides on top of the file
    bool debug_stages = false;
    bool export_trimaps = false;
    double trimap_lo = 0.2;
    double trimap_hi = 0.8;
};

// Runs the pipeline over a frame directory and writes masks/NNNN.png,
// boxes.json, timings.json, manifest.json (plus stages/ and trimaps/ when
// requested). Returns a process exit code.
int cmd_segment(const SegmentOptions& opt);

struct EvalOptions {
    std::string pred_boxes;  // boxes.json produced by segment
    std::string pred_masks;  // directory of soft-mask PNGs
    std::string gt_boxes;    // CSV (frame,x,y,w,h) or JSON
    std::string gt_masks;    // directory of binary PNGs
    std::string metric = "corloc";  // corloc | iou | prf
    double threshold = 0.5;
    std::string output;  // optional JSON report path
};

int cmd_eval(const EvalOptions& opt);

struct HppSimOptions {
    int scenarios = 10000;
    int support = 8;
    std::uint64_t seed = 0;
    std::string output;
};

int cmd_hpp_sim(const HppSimOptions& opt);

struct BenchOptions {
    std::string input_dir;
    std::string config_path;
    nlohmann::json overrides;
    int repetitions = 3;
    std::string output;
};

struct BenchReport {
    std::map<std::string, double> median_seconds_per_frame;
    double total_seconds_per_frame = 0.0;
    std::vector<std::map<std::string, double>> runs;
    int frames = 0;
};

BenchReport run_bench(const BenchOptions& opt);
int cmd_bench(const BenchOptions& opt);

struct KsweepOptions {
    std::vector<int> ks;
    int width = 160;
    int height = 120;
    int frames = 30;
    std::uint64_t seed = 7;
    nlohmann::json overrides;
    std::string output;  // CSV path; stdout when empty
};

struct KsweepRow {
    int k = 0;
    double f_measure = 0.0;
    double seconds_per_frame = 0.0;
};

std::vector<KsweepRow> run_ksweep(const KsweepOptions& opt);
int cmd_ksweep(const KsweepOptions& opt);

// Loaders shared with the eval tooling.
std::map<int, BoundingBox> load_pred_boxes(const std::string& path);
GroundTruth load_gt_boxes(const std::string& path);

// Metric binarization convention: threshold the normalized mask at 0.5.
BinaryMask binarize_normalized(const SoftMask& mask, double clip_percentile = 95.0);

std::string hardware_string();

}  // namespace hppseg::cli
