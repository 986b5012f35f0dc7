#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hppseg/eval.hpp"
#include "hppseg/raster.hpp"

namespace hppseg {

struct PipelineConfig {
    int n_u = 3;                  // frame-PCA components
    int n_mask_components = 8;    // mask-projection components
    double sigma1_frac = 0.05;    // initial-cue smoothing, fraction of min dim
    double sigma2_frac = 0.02;    // mask-projection smoothing
    double fg_threshold = 0.5;
    int window = 15;
    int stride = 8;
    int k = 120;
    double lambda = 1.0;
    int max_samples = 20000;
    double clip_percentile = 95.0;
    double alpha_motion_smooth = 1.0;
    double bbox_beta = 2.0;
    double bbox_bandwidth_frac = 0.2;
    int pca_max_dim = 120;
    std::uint64_t seed = 0;
    int threads = 0;                 // 0 = all cores
    bool keep_stage_masks = false;   // retain per-stage debug masks
    bool soft_color_weights = false; // fractional foreground counts

    void validate() const;  // throws on out-of-range values
};

// Per-frame intermediate masks, retained when keep_stage_masks is set.
struct StageMasks {
    SoftMask p1;  // smoothed, center-weighted PCA error cue
    SoftMask s1;  // first pixel-level classification
    SoftMask p2;  // projected + smoothed mask
    SoftMask s2;  // second pixel-level classification
    SoftMask s3;  // patch-level regression output
    SoftMask m;   // motion residual cue
};

inline constexpr const char* kStageNames[4] = {"step1-2", "step3-4", "step5", "step6"};

struct PipelineResult {
    std::vector<SoftMask> masks;  // final per-frame soft masks
    std::vector<BoundingBox> boxes;
    std::vector<StageMasks> stages;                     // empty unless requested
    std::map<std::string, double> seconds_per_frame;    // one entry per stage group
    bool degenerate_motion = false;                     // any frame fell back to appearance-only
    bool degenerate_color = false;                      // all-fg/all-bg labeling was seen
};

PipelineResult run_pipeline(const FrameSequence& video, const PipelineConfig& cfg);

struct WeightedPoint {
    double x = 0.0;
    double y = 0.0;
    double weight = 0.0;
};

// Flat-kernel weighted mean shift from the weighted centroid; stops when the
// shift drops below 0.5 px or after 50 iterations.
std::pair<double, double> mean_shift_mode(const std::vector<WeightedPoint>& points,
                                          double bandwidth);

// Box around the mode of the high-probability pixels: half-extent per axis is
// beta times their weighted standard deviation about the mode. An empty
// high-probability set yields a flagged full-frame box.
BoundingBox extract_bbox(const SoftMask& mask, const PipelineConfig& cfg);

enum class TrimapLabel : std::uint8_t { background = 0, unknown = 128, foreground = 255 };

struct Trimap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;  // 0 / 128 / 255
};

// fg where mask >= hi, bg where mask <= lo, unknown between.
Trimap export_trimap(const SoftMask& mask, double lo, double hi);

}  // namespace hppseg
