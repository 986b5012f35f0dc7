#pragma once

#include <array>
#include <vector>

#include "hppseg/color.hpp"
#include "hppseg/raster.hpp"

namespace hppseg {

// Empirical foreground/background color statistics pooled over a whole shot.
//
// The likelihoods follow the per-color fractions p(c|fg) = n(c,fg) / n(c)
// and p(c|bg) = n(c,bg) / n(c); with equal priors the posterior collapses to
// p(fg|c) = (n(c,fg) + eps) / (n(c) + 2*eps). Unseen colors sit at 0.5.
struct ColorModel {
    std::array<double, kColorCount> fg_counts{};
    std::array<double, kColorCount> total_counts{};
    std::array<double, kColorCount> posterior{};
    double smoothing = 1.0;
    bool all_foreground = false;  // degenerate labeling warnings
    bool all_background = false;

    void recompute_posterior();
};

// Accumulates counts over all frames. Pixels whose mask value is >=
// fg_threshold count as foreground; with soft_weights the mask value itself
// is used as a fractional foreground count.
ColorModel estimate_color_model(const std::vector<QuantizedFrame>& frames,
                                const std::vector<SoftMask>& masks, double fg_threshold = 0.5,
                                double smoothing = 1.0, bool soft_weights = false);
ColorModel estimate_color_model(const FrameSequence& video, const std::vector<SoftMask>& masks,
                                double fg_threshold = 0.5, double smoothing = 1.0,
                                bool soft_weights = false);

double pixel_posterior(const ColorModel& model, int color);

SoftMask classify_frame(const QuantizedFrame& frame, const ColorModel& model);
SoftMask classify_frame(const Image& frame, const ColorModel& model);

}  // namespace hppseg
