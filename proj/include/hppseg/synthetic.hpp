#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hppseg/eval.hpp"
#include "hppseg/raster.hpp"

namespace hppseg::synthetic {

// Moving uniformly-colored square over a static, color-diverse textured
// background, with mild per-frame sensor noise. Ground truth is exact.
struct MovingSquareParams {
    int width = 160;
    int height = 120;
    int n_frames = 30;
    int square = 20;          // side in pixels
    double vx = 2.0;          // px/frame, bounces off a small margin
    double vy = 1.0;
    double start_x_frac = 0.28;
    double start_y_frac = 0.30;
    double noise_sigma = 1.5;        // gray levels per channel
    double distractor_frac = 0.015;  // static square-colored specks in the background
    std::uint64_t seed = 7;
};

struct MovingSquareVideo {
    FrameSequence video;
    std::vector<BinaryMask> gt_masks;
    std::map<int, std::vector<BoundingBox>> gt_boxes;
};

MovingSquareVideo make_moving_square(const MovingSquareParams& params = {});

// Smooth band-limited texture, defined as a continuous function so shifted
// frames can be rendered exactly (no interpolation error).
struct TextureParams {
    std::uint64_t seed = 11;
    int n_waves = 4;
    double min_wavelength = 25.0;
    double max_wavelength = 60.0;
};

double texture_value(const TextureParams& params, double x, double y);  // in [0,1]

// Samples texture_value(x - shift_x, y - shift_y) on the pixel grid.
SoftMask render_texture(const TextureParams& params, int width, int height, double shift_x = 0.0,
                        double shift_y = 0.0);

}  // namespace hppseg::synthetic
