#include "hppseg/colormodel.hpp"

#include <stdexcept>

namespace hppseg {

void ColorModel::recompute_posterior() {
    for (int c = 0; c < kColorCount; ++c) {
        posterior[c] = pixel_posterior(*this, c);
    }
}

double pixel_posterior(const ColorModel& model, int color) {
    if (color < 0 || color >= kColorCount) throw std::out_of_range("color index out of range");
    const double eps = model.smoothing;
    const double n = model.total_counts[color];
    const double n_fg = model.fg_counts[color];
    const double denom = n + 2.0 * eps;
    if (denom <= 0.0) return 0.5;  // eps = 0 and unseen color
    return (n_fg + eps) / denom;
}

ColorModel estimate_color_model(const std::vector<QuantizedFrame>& frames,
                                const std::vector<SoftMask>& masks, double fg_threshold,
                                double smoothing, bool soft_weights) {
    if (frames.size() != masks.size()) {
        throw std::invalid_argument("need one mask per frame");
    }
    if (!(fg_threshold > 0.0 && fg_threshold < 1.0)) {
        throw std::invalid_argument("fg_threshold must be in (0,1)");
    }
    ColorModel model;
    model.smoothing = smoothing;
    double fg_total = 0.0, px_total = 0.0;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const QuantizedFrame& q = frames[f];
        const SoftMask& m = masks[f];
        if (m.width != q.width || m.height != q.height) {
            throw std::invalid_argument("mask dimensions do not match frame");
        }
        for (std::size_t i = 0; i < q.colors.size(); ++i) {
            const int c = q.colors[i];
            const double w = soft_weights ? m.values[i] : (m.values[i] >= fg_threshold ? 1.0 : 0.0);
            model.fg_counts[c] += w;
            model.total_counts[c] += 1.0;
            fg_total += w;
            px_total += 1.0;
        }
    }
    model.all_foreground = px_total > 0.0 && fg_total >= px_total;
    model.all_background = px_total > 0.0 && fg_total <= 0.0;
    model.recompute_posterior();
    return model;
}

ColorModel estimate_color_model(const FrameSequence& video, const std::vector<SoftMask>& masks,
                                double fg_threshold, double smoothing, bool soft_weights) {
    std::vector<QuantizedFrame> quantized;
    quantized.reserve(video.frames.size());
    for (const Image& f : video.frames) quantized.push_back(quantize_frame(f));
    return estimate_color_model(quantized, masks, fg_threshold, smoothing, soft_weights);
}

SoftMask classify_frame(const QuantizedFrame& frame, const ColorModel& model) {
    SoftMask out(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.colors.size(); ++i) {
        out.values[i] = model.posterior[frame.colors[i]];
    }
    return out;
}

SoftMask classify_frame(const Image& frame, const ColorModel& model) {
    return classify_frame(quantize_frame(frame), model);
}

}  // namespace hppseg
