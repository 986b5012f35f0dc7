#include "hppseg/color.hpp"

#include <algorithm>
#include <cmath>

namespace hppseg {

int quantize_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double c = mx - mn;

    double h = 0.0;  // hue of achromatic pixels pinned to 0
    if (c > 0.0) {
        if (mx == r) {
            h = 60.0 * std::fmod((g - b) / c, 6.0);
        } else if (mx == g) {
            h = 60.0 * ((b - r) / c + 2.0);
        } else {
            h = 60.0 * ((r - g) / c + 4.0);
        }
        if (h < 0.0) h += 360.0;
    }
    const double s = mx > 0.0 ? c / mx : 0.0;
    const double v = mx;

    const int hb = std::min(kHueBins - 1, static_cast<int>(h * kHueBins / 360.0));
    const int sb = std::min(kSatBins - 1, static_cast<int>(s * kSatBins));
    const int vb = std::min(kValBins - 1, static_cast<int>(v * kValBins));
    return (hb * kSatBins + sb) * kValBins + vb;
}

QuantizedFrame quantize_frame(const Image& img) {
    QuantizedFrame out(img.width, img.height);
    const std::uint8_t* p = img.data.data();
    for (std::size_t i = 0; i < out.colors.size(); ++i, p += 3) {
        out.colors[i] = static_cast<std::uint16_t>(quantize_hsv(p[0], p[1], p[2]));
    }
    return out;
}

}  // namespace hppseg
