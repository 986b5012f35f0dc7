#pragma once

#include <cstdint>
#include <vector>

#include "hppseg/raster.hpp"

namespace hppseg {

inline constexpr int kHueBins = 15;
inline constexpr int kSatBins = 11;
inline constexpr int kValBins = 7;
inline constexpr int kColorCount = kHueBins * kSatBins * kValBins;  // 1155

// Flat HSV bin index in [0, kColorCount). Uniform bins over H in [0,360),
// S and V in [0,1]; values at the top edge fall into the last bin.
int quantize_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Per-pixel color indices of a frame.
struct QuantizedFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> colors;

    QuantizedFrame() = default;
    QuantizedFrame(int w, int h) : width(w), height(h), colors(static_cast<std::size_t>(w) * h, 0) {}

    std::uint16_t at(int x, int y) const { return colors[static_cast<std::size_t>(y) * width + x]; }
};

QuantizedFrame quantize_frame(const Image& img);

}  // namespace hppseg
