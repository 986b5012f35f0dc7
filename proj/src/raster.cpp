#include "hppseg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hppseg {

void FrameSequence::validate() const {
    if (frames.size() < 2) {
        throw std::invalid_argument("frame sequence needs at least 2 frames, got " +
                                    std::to_string(frames.size()));
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].width != width || frames[i].height != height) {
            throw std::invalid_argument("frame " + std::to_string(i) + " is " +
                                        std::to_string(frames[i].width) + "x" +
                                        std::to_string(frames[i].height) + ", expected " +
                                        std::to_string(width) + "x" + std::to_string(height));
        }
    }
}

SoftMask to_grayscale(const Image& img) {
    SoftMask out(img.width, img.height);
    const std::uint8_t* p = img.data.data();
    for (std::size_t i = 0; i < out.size(); ++i, p += 3) {
        out.values[i] = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }
    return out;
}

SoftMask resize_bilinear(const SoftMask& in, int out_width, int out_height) {
    if (out_width == in.width && out_height == in.height) return in;
    SoftMask out(out_width, out_height);
    const double sx = static_cast<double>(in.width) / out_width;
    const double sy = static_cast<double>(in.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(in.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, in.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(in.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, in.width - 1);
            const double wx = fx - x0;
            out.at(x, y) = (1 - wy) * ((1 - wx) * in.at(x0, y0) + wx * in.at(x1, y0)) +
                           wy * ((1 - wx) * in.at(x0, y1) + wx * in.at(x1, y1));
        }
    }
    return out;
}

BinaryMask binarize(const SoftMask& mask, double threshold) {
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        out.values[i] = mask.values[i] >= threshold ? 1 : 0;
    }
    return out;
}

}  // namespace hppseg
