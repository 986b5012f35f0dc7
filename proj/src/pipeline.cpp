#include "hppseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hppseg/color.hpp"
#include "hppseg/colormodel.hpp"
#include "hppseg/filters.hpp"
#include "hppseg/motion.hpp"
#include "hppseg/parallel.hpp"
#include "hppseg/patchmodel.hpp"
#include "hppseg/subspace.hpp"

namespace hppseg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Fraction of the small-raster dimension used for the center prior.
constexpr double kCenterPriorFrac = 1.0 / 3.0;

}  // namespace

void PipelineConfig::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    if (n_u < 1 || n_mask_components < 1 || window < 1 || stride < 1 || k < 1 || pca_max_dim < 1) {
        throw std::invalid_argument("counts in the pipeline config must be >= 1");
    }
    positive(sigma1_frac, "sigma1_frac");
    positive(sigma2_frac, "sigma2_frac");
    if (!(fg_threshold > 0.0 && fg_threshold < 1.0)) {
        throw std::invalid_argument("fg_threshold must be in (0,1)");
    }
    if (!(clip_percentile > 0.0 && clip_percentile <= 100.0)) {
        throw std::invalid_argument("clip_percentile must be in (0,100]");
    }
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    positive(bbox_beta, "bbox_beta");
    positive(bbox_bandwidth_frac, "bbox_bandwidth_frac");
    if (alpha_motion_smooth < 0.0) throw std::invalid_argument("alpha_motion_smooth must be >= 0");
    if (k > kColorCount) throw std::invalid_argument("k cannot exceed the color count");
}

std::pair<double, double> mean_shift_mode(const std::vector<WeightedPoint>& points,
                                          double bandwidth) {
    double total = 0.0, mx = 0.0, my = 0.0;
    for (const WeightedPoint& p : points) {
        total += p.weight;
        mx += p.weight * p.x;
        my += p.weight * p.y;
    }
    if (!(total > 0.0)) throw std::invalid_argument("mean shift needs positive total weight");
    mx /= total;
    my /= total;

    const double bw2 = bandwidth * bandwidth;
    for (int it = 0; it < 50; ++it) {
        double w = 0.0, nx = 0.0, ny = 0.0;
        for (const WeightedPoint& p : points) {
            const double dx = p.x - mx, dy = p.y - my;
            if (dx * dx + dy * dy <= bw2) {
                w += p.weight;
                nx += p.weight * p.x;
                ny += p.weight * p.y;
            }
        }
        if (!(w > 0.0)) break;  // empty window: stay put
        nx /= w;
        ny /= w;
        const double shift = std::hypot(nx - mx, ny - my);
        mx = nx;
        my = ny;
        if (shift < 0.5) break;
    }
    return {mx, my};
}

BoundingBox extract_bbox(const SoftMask& mask, const PipelineConfig& cfg) {
    std::vector<WeightedPoint> points;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const double v = mask.at(x, y);
            if (v >= 0.5) points.push_back({static_cast<double>(x), static_cast<double>(y), v});
        }
    }
    if (points.empty()) {
        return BoundingBox{0, 0, mask.width, mask.height, true};
    }
    const double diag = std::hypot(mask.width, mask.height);
    const auto [cx, cy] = mean_shift_mode(points, cfg.bbox_bandwidth_frac * diag);

    double total = 0.0, vx = 0.0, vy = 0.0;
    for (const WeightedPoint& p : points) {
        total += p.weight;
        vx += p.weight * (p.x - cx) * (p.x - cx);
        vy += p.weight * (p.y - cy) * (p.y - cy);
    }
    const double sx = std::sqrt(vx / total);
    const double sy = std::sqrt(vy / total);

    int x0 = static_cast<int>(std::floor(cx - cfg.bbox_beta * sx));
    int y0 = static_cast<int>(std::floor(cy - cfg.bbox_beta * sy));
    int x1 = static_cast<int>(std::ceil(cx + cfg.bbox_beta * sx));
    int y1 = static_cast<int>(std::ceil(cy + cfg.bbox_beta * sy));
    x0 = std::clamp(x0, 0, mask.width - 1);
    y0 = std::clamp(y0, 0, mask.height - 1);
    x1 = std::clamp(x1, x0, mask.width - 1);
    y1 = std::clamp(y1, y0, mask.height - 1);
    return BoundingBox{x0, y0, std::max(1, x1 - x0 + 1), std::max(1, y1 - y0 + 1), false};
}

Trimap export_trimap(const SoftMask& mask, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
        throw std::invalid_argument("need 0 <= lo < hi <= 1");
    }
    Trimap t;
    t.width = mask.width;
    t.height = mask.height;
    t.values.resize(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const double v = mask.values[i];
        t.values[i] = v >= hi   ? static_cast<std::uint8_t>(TrimapLabel::foreground)
                      : v <= lo ? static_cast<std::uint8_t>(TrimapLabel::background)
                                : static_cast<std::uint8_t>(TrimapLabel::unknown);
    }
    return t;
}

PipelineResult run_pipeline(const FrameSequence& video, const PipelineConfig& cfg) {
    video.validate();
    cfg.validate();
    const int n = static_cast<int>(video.size());
    const int full_w = video.width, full_h = video.height;

    PipelineResult result;
    result.masks.resize(n);
    result.boxes.resize(n);
    if (cfg.keep_stage_masks) result.stages.resize(n);

    // ---- Steps 1-2: PCA error cue and first pixel-level model ----
    auto t0 = Clock::now();

    std::vector<SoftMask> gray(n);
    parallel_for(n, cfg.threads, [&](int i) { gray[i] = to_grayscale(video.frames[i]); });

    const double scale = std::min(1.0, static_cast<double>(cfg.pca_max_dim) /
                                           std::max(full_w, full_h));
    const int small_w = std::max(2, static_cast<int>(std::lround(full_w * scale)));
    const int small_h = std::max(2, static_cast<int>(std::lround(full_h * scale)));
    std::vector<SoftMask> small_gray(n);
    parallel_for(n, cfg.threads,
                 [&](int i) { small_gray[i] = resize_bilinear(gray[i], small_w, small_h); });

    const SubspaceModel frame_model = fit_pca_auto(stack_masks(small_gray), cfg.n_u);
    const SoftMask prior = center_prior(small_h, small_w, kCenterPriorFrac * small_w,
                                        kCenterPriorFrac * small_h);
    const double sigma1 = cfg.sigma1_frac * std::min(small_w, small_h);

    std::vector<SoftMask> p1(n);
    parallel_for(n, cfg.threads, [&](int i) {
        SoftMask err = reconstruction_error(small_gray[i], frame_model);
        err = gaussian_smooth(err, sigma1);
        for (std::size_t j = 0; j < err.size(); ++j) err.values[j] *= prior.values[j];
        err = normalize_unit(err, cfg.clip_percentile);
        p1[i] = resize_bilinear(err, full_w, full_h);
    });

    std::vector<QuantizedFrame> quantized(n);
    parallel_for(n, cfg.threads, [&](int i) { quantized[i] = quantize_frame(video.frames[i]); });

    const ColorModel model1 = estimate_color_model(quantized, p1, cfg.fg_threshold, 1.0,
                                                   cfg.soft_color_weights);
    std::vector<SoftMask> s1(n);
    parallel_for(n, cfg.threads, [&](int i) { s1[i] = classify_frame(quantized[i], model1); });
    result.degenerate_color = model1.all_foreground || model1.all_background;

    result.seconds_per_frame[kStageNames[0]] = seconds_since(t0) / n;

    // ---- Steps 3-4: mask projection and second pixel-level model ----
    t0 = Clock::now();
    const double sigma2 = cfg.sigma2_frac * std::min(full_w, full_h);
    // The projected masks are already probability-scale (clamped projections
    // of posteriors), so they are thresholded directly.
    std::vector<SoftMask> p2 = project_masks(s1, cfg.n_mask_components, sigma2);

    const ColorModel model2 = estimate_color_model(quantized, p2, cfg.fg_threshold, 1.0,
                                                   cfg.soft_color_weights);
    std::vector<SoftMask> s2(n);
    parallel_for(n, cfg.threads, [&](int i) { s2[i] = classify_frame(quantized[i], model2); });
    result.degenerate_color |= model2.all_foreground || model2.all_background;

    result.seconds_per_frame[kStageNames[1]] = seconds_since(t0) / n;

    // ---- Step 5: patch-level regression ----
    t0 = Clock::now();
    const TrainingSet training = build_training_set(quantized, s2, cfg.stride, cfg.window,
                                                    cfg.max_samples, cfg.seed);
    if (training.size() < 2) throw std::runtime_error("too few patch samples; frames smaller than window?");
    const Eigen::MatrixXd covariance = color_covariance(training);
    const SelectionMask selection = select_features(covariance, cfg.k, 100, 8, cfg.seed);
    const Eigen::MatrixXd design = selected_design_matrix(training, selection);
    const RegressionModel regression = train_regression(design, training.labels, cfg.lambda,
                                                        selection);
    std::vector<SoftMask> s3(n);
    parallel_for(n, cfg.threads,
                 [&](int i) { s3[i] = evaluate_dense(quantized[i], regression, cfg.window); });

    result.seconds_per_frame[kStageNames[2]] = seconds_since(t0) / n;

    // ---- Step 6: motion cue, combination, boxes ----
    t0 = Clock::now();
    std::vector<std::uint8_t> frame_degenerate(n, 0);
    std::vector<SoftMask> motion_masks(n);
    parallel_for(n, cfg.threads, [&](int i) {
        // The last frame pairs backwards; the residual magnitude is unaffected.
        const int other = i + 1 < n ? i + 1 : i - 1;
        const Derivatives d = image_derivatives(gray[i], gray[other]);
        const BinaryMask bg = [&] {
            BinaryMask b(full_w, full_h);
            for (std::size_t j = 0; j < b.values.size(); ++j) {
                b.values[j] = s3[i].values[j] < 0.5 ? 1 : 0;
            }
            return b;
        }();
        AffineMotionModel model = fit_affine_background(d.ix, d.iy, d.it, bg);
        model.frame_index = i;
        if (model.degenerate) {
            frame_degenerate[i] = 1;
            result.masks[i] = normalize_unit(s3[i], cfg.clip_percentile);
            motion_masks[i] = SoftMask(full_w, full_h);
        } else {
            // spread of the estimated object region: the high half of the
            // normalized appearance mask, not the whole field; capped at a
            // quarter dimension (larger sigmas flatten the cue and only cost)
            ObjectSpread spread = mask_spread(normalize_unit(s3[i], cfg.clip_percentile), 0.5);
            spread.std_x = std::min(spread.std_x, full_w / 4.0);
            spread.std_y = std::min(spread.std_y, full_h / 4.0);
            motion_masks[i] = motion_residual_mask(model, d.ix, d.iy, d.it, spread,
                                                   cfg.alpha_motion_smooth, cfg.clip_percentile);
            result.masks[i] = combine_masks(s3[i], motion_masks[i], cfg.clip_percentile);
        }
        result.boxes[i] = extract_bbox(result.masks[i], cfg);
    });
    for (int i = 0; i < n; ++i) result.degenerate_motion |= frame_degenerate[i] != 0;

    result.seconds_per_frame[kStageNames[3]] = seconds_since(t0) / n;

    if (cfg.keep_stage_masks) {
        for (int i = 0; i < n; ++i) {
            result.stages[i] = StageMasks{std::move(p1[i]),  std::move(s1[i]),
                                          std::move(p2[i]),  std::move(s2[i]),
                                          std::move(s3[i]),  std::move(motion_masks[i])};
        }
    }
    return result;
}

}  // namespace hppseg
