#include "hppseg/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hppseg {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0) return {1.0};
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Symmetric (edge-repeating) reflection: -1 -> 0, n -> n-1, handles any
// number of bounces.
inline int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int j = i % period;
    if (j < 0) j += period;
    return j < n ? j : period - 1 - j;
}

void convolve_rows(const SoftMask& in, const std::vector<double>& kernel, SoftMask& out) {
    const int radius = static_cast<int>(kernel.size() / 2);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                acc += kernel[t + radius] * in.at(reflect(x + t, in.width), y);
            }
            out.at(x, y) = acc;
        }
    }
}

void convolve_cols(const SoftMask& in, const std::vector<double>& kernel, SoftMask& out) {
    const int radius = static_cast<int>(kernel.size() / 2);
    for (int x = 0; x < in.width; ++x) {
        for (int y = 0; y < in.height; ++y) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                acc += kernel[t + radius] * in.at(x, reflect(y + t, in.height));
            }
            out.at(x, y) = acc;
        }
    }
}

}  // namespace

SoftMask gaussian_smooth(const SoftMask& mask, double sigma) {
    return gaussian_smooth(mask, sigma, sigma);
}

SoftMask gaussian_smooth(const SoftMask& mask, double sigma_x, double sigma_y) {
    if (sigma_x < 0.0 || sigma_y < 0.0) throw std::invalid_argument("negative sigma");
    if (sigma_x <= 0.0 && sigma_y <= 0.0) return mask;
    if (sigma_y <= 0.0) {
        SoftMask out(mask.width, mask.height);
        convolve_rows(mask, gaussian_kernel(sigma_x), out);
        return out;
    }
    if (sigma_x <= 0.0) {
        SoftMask out(mask.width, mask.height);
        convolve_cols(mask, gaussian_kernel(sigma_y), out);
        return out;
    }
    SoftMask tmp(mask.width, mask.height);
    convolve_rows(mask, gaussian_kernel(sigma_x), tmp);
    SoftMask out(mask.width, mask.height);
    convolve_cols(tmp, gaussian_kernel(sigma_y), out);
    return out;
}

SoftMask center_prior(int height, int width, double sigma_x, double sigma_y) {
    if (height <= 0 || width <= 0 || sigma_x <= 0.0 || sigma_y <= 0.0) {
        throw std::invalid_argument("center_prior needs positive dimensions and sigmas");
    }
    SoftMask out(width, height);
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    for (int y = 0; y < height; ++y) {
        const double dy = (y - cy) / sigma_y;
        for (int x = 0; x < width; ++x) {
            const double dx = (x - cx) / sigma_x;
            out.at(x, y) = std::exp(-0.5 * (dx * dx + dy * dy));
        }
    }
    return out;
}

double percentile(const std::vector<double>& values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile of empty sample");
    p = std::clamp(p, 0.0, 100.0);
    std::vector<double> sorted(values);
    const double rank = p / 100.0 * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    std::nth_element(sorted.begin(), sorted.begin() + lo, sorted.end());
    const double v_lo = sorted[lo];
    if (lo + 1 >= sorted.size()) return v_lo;
    const double frac = rank - lo;
    if (frac == 0.0) return v_lo;
    const double v_hi = *std::min_element(sorted.begin() + lo + 1, sorted.end());
    return v_lo + frac * (v_hi - v_lo);
}

SoftMask normalize_unit(const SoftMask& mask, double clip_percentile) {
    SoftMask out(mask.width, mask.height);
    if (mask.values.empty()) return out;
    const double lo = *std::min_element(mask.values.begin(), mask.values.end());
    const double hi = percentile(mask.values, clip_percentile);
    const double range = hi - lo;
    if (!(range > 0.0)) return out;  // constant (or degenerate) field -> zeros
    for (std::size_t i = 0; i < mask.size(); ++i) {
        out.values[i] = std::clamp((mask.values[i] - lo) / range, 0.0, 1.0);
    }
    return out;
}

}  // namespace hppseg
