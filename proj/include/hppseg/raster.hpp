#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hppseg {

// Interleaved 8-bit RGB image.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // size = width * height * 3, row-major

    Image() = default;
    Image(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* pixel(int x, int y) { return data.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
};

// Real-valued raster. Pipeline stages keep values in [0,1]; intermediate
// fields (derivatives, residuals) may hold arbitrary reals.
struct SoftMask {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // row-major

    SoftMask() = default;
    SoftMask(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return values.size(); }
};

// Ordered uniform-size frames of one shot.
struct FrameSequence {
    std::vector<Image> frames;
    int width = 0;
    int height = 0;
    std::string shot_id;

    std::size_t size() const { return frames.size(); }
    // Throws std::invalid_argument on size mismatch or fewer than 2 frames.
    void validate() const;
};

// Binary raster used for ground truth and metric inputs.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;  // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Luma grayscale in [0,1].
SoftMask to_grayscale(const Image& img);

SoftMask resize_bilinear(const SoftMask& in, int out_width, int out_height);

// Thresholds a soft mask at `threshold` (inclusive).
BinaryMask binarize(const SoftMask& mask, double threshold);

}  // namespace hppseg
