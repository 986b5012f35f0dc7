#include "hppseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hppseg::synthetic {

namespace {

constexpr double kPi = 3.14159265358979323846;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Portable Gaussian (Box-Muller); std::normal_distribution is
// implementation-defined and would break cross-platform determinism.
double gaussian(std::mt19937_64& rng) {
    const double u1 = std::max(uniform01(rng), 1e-300);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t hash_coords(std::uint64_t seed, std::uint64_t x, std::uint64_t y) {
    std::uint64_t h = seed ^ (x * 0x9e3779b97f4a7c15ULL) ^ (y * 0xc2b2ae3d27d4eb4fULL);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

double hash01(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

void hsv_to_rgb(double h, double s, double v, std::uint8_t* rgb) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) {
        r = c; g = x;
    } else if (hp < 2) {
        r = x; g = c;
    } else if (hp < 3) {
        g = c; b = x;
    } else if (hp < 4) {
        g = x; b = c;
    } else if (hp < 5) {
        r = x; b = c;
    } else {
        r = c; b = x;
    }
    const double m = v - c;
    rgb[0] = static_cast<std::uint8_t>(std::lround(std::clamp(r + m, 0.0, 1.0) * 255.0));
    rgb[1] = static_cast<std::uint8_t>(std::lround(std::clamp(g + m, 0.0, 1.0) * 255.0));
    rgb[2] = static_cast<std::uint8_t>(std::lround(std::clamp(b + m, 0.0, 1.0) * 255.0));
}

double fract(double v) { return v - std::floor(v); }

}  // namespace

MovingSquareVideo make_moving_square(const MovingSquareParams& p) {
    MovingSquareVideo out;
    out.video.width = p.width;
    out.video.height = p.height;
    out.video.shot_id = "synthetic-moving-square";

    // Static background drawn from a coarse palette of HSV bin-center colors
    // (hues away from the square's red). A few base colors are dense enough
    // to appear in every patch window; the sparser detail colors make the
    // number of colors inside a window track its background area.
    struct Hsv {
        double h, s, v;
    };
    std::vector<Hsv> palette;
    const int sat_bins[3] = {5, 7, 9};
    const int val_bins[3] = {3, 4, 6};
    for (int i = 0; palette.size() < 34; ++i) {
        const int hue_bin = 3 + (i % 11);  // hue in [72, 336), far from red
        const int sb = sat_bins[(i / 11) % 3];
        const int vb = val_bins[(i / 2) % 3];
        palette.push_back({(hue_bin + 0.5) * 24.0, (sb + 0.5) / 11.0, (vb + 0.5) / 7.0});
    }
    const int n_base = 6;
    const int n_detail = static_cast<int>(palette.size()) - n_base;

    // Isolated specks of the square's own color keep the pixel-level color
    // model honestly imperfect; only patch context and motion can reject them.
    const std::uint8_t square_rgb[3] = {230, 25, 25};

    Image background(p.width, p.height);
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            std::uint8_t* px = background.pixel(x, y);
            const std::uint64_t h = hash_coords(p.seed, x, y);
            if (hash01(h * 0x9e3779b97f4a7c15ULL + 3) < p.distractor_frac) {
                px[0] = square_rgb[0];
                px[1] = square_rgb[1];
                px[2] = square_rgb[2];
                continue;
            }
            const Hsv hsv = hash01(h) < 0.5
                                ? palette[h % n_base]
                                : palette[n_base + (h >> 8) % n_detail];
            hsv_to_rgb(hsv.h, hsv.s, hsv.v, px);
        }
    }
    const int margin = 2;
    double px = p.start_x_frac * p.width;
    double py = p.start_y_frac * p.height;
    double vx = p.vx, vy = p.vy;

    std::mt19937_64 noise_rng(p.seed * 0x9e3779b97f4a7c15ULL + 1);
    for (int f = 0; f < p.n_frames; ++f) {
        const int sx = static_cast<int>(std::lround(px));
        const int sy = static_cast<int>(std::lround(py));

        Image frame = background;
        BinaryMask gt(p.width, p.height);
        for (int y = sy; y < sy + p.square; ++y) {
            for (int x = sx; x < sx + p.square; ++x) {
                if (x < 0 || y < 0 || x >= p.width || y >= p.height) continue;
                std::uint8_t* px8 = frame.pixel(x, y);
                px8[0] = square_rgb[0];
                px8[1] = square_rgb[1];
                px8[2] = square_rgb[2];
                gt.at(x, y) = 1;
            }
        }
        if (p.noise_sigma > 0.0) {
            for (std::uint8_t& v : frame.data) {
                const double noisy = v + p.noise_sigma * gaussian(noise_rng);
                v = static_cast<std::uint8_t>(std::clamp(noisy, 0.0, 255.0));
            }
        }
        out.video.frames.push_back(std::move(frame));
        out.gt_masks.push_back(std::move(gt));
        out.gt_boxes[f] = {BoundingBox{sx, sy, p.square, p.square, false}};

        px += vx;
        py += vy;
        if (px < margin || px + p.square > p.width - margin) vx = -vx;
        if (py < margin || py + p.square > p.height - margin) vy = -vy;
    }
    return out;
}

namespace {

struct Wave {
    double kx, ky, phase;
};

std::vector<Wave> make_waves(const TextureParams& params) {
    std::mt19937_64 rng(params.seed);
    std::vector<Wave> waves(params.n_waves);
    for (Wave& w : waves) {
        const double wavelength =
            params.min_wavelength + (params.max_wavelength - params.min_wavelength) * uniform01(rng);
        const double angle = 2.0 * kPi * uniform01(rng);
        const double phase = 2.0 * kPi * uniform01(rng);
        w = {2.0 * kPi * std::cos(angle) / wavelength, 2.0 * kPi * std::sin(angle) / wavelength,
             phase};
    }
    return waves;
}

double eval_waves(const std::vector<Wave>& waves, double x, double y) {
    double acc = 0.0;
    for (const Wave& w : waves) acc += std::sin(w.kx * x + w.ky * y + w.phase);
    return 0.5 + 0.4 * acc / static_cast<double>(waves.size());
}

}  // namespace

double texture_value(const TextureParams& params, double x, double y) {
    return eval_waves(make_waves(params), x, y);
}

SoftMask render_texture(const TextureParams& params, int width, int height, double shift_x,
                        double shift_y) {
    const std::vector<Wave> waves = make_waves(params);
    SoftMask out(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            out.at(x, y) = eval_waves(waves, x - shift_x, y - shift_y);
        }
    }
    return out;
}

}  // namespace hppseg::synthetic
