#include "hppseg/motion.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "hppseg/filters.hpp"

namespace hppseg {

namespace {

inline double norm_coord(int i, int n) {
    return n > 1 ? 2.0 * i / (n - 1) - 1.0 : 0.0;
}

inline void basis_row(double x, double y, double gx, double gy, double* row) {
    row[0] = gx;
    row[1] = gy;
    row[2] = x * gx;
    row[3] = y * gx;
    row[4] = x * gy;
    row[5] = y * gy;
}

}  // namespace

Derivatives image_derivatives(const SoftMask& frame_t, const SoftMask& frame_t1) {
    if (frame_t.width != frame_t1.width || frame_t.height != frame_t1.height) {
        throw std::invalid_argument("frame dimensions differ");
    }
    const int w = frame_t.width, h = frame_t.height;
    Derivatives d{SoftMask(w, h), SoftMask(w, h), SoftMask(w, h)};
    for (int y = 0; y < h; ++y) {
        const int yl = std::max(0, y - 1), yr = std::min(h - 1, y + 1);
        for (int x = 0; x < w; ++x) {
            const int xl = std::max(0, x - 1), xr = std::min(w - 1, x + 1);
            d.ix.at(x, y) = 0.5 * (frame_t.at(xr, y) - frame_t.at(xl, y));
            d.iy.at(x, y) = 0.5 * (frame_t.at(x, yr) - frame_t.at(x, yl));
            d.it.at(x, y) = frame_t1.at(x, y) - frame_t.at(x, y);
        }
    }
    return d;
}

AffineMotionModel fit_affine_background(const SoftMask& ix, const SoftMask& iy, const SoftMask& it,
                                        const BinaryMask& bg_mask) {
    if (ix.width != bg_mask.width || ix.height != bg_mask.height) {
        throw std::invalid_argument("mask dimensions differ from derivatives");
    }
    const int w = ix.width, h = ix.height;
    Eigen::Matrix<double, 6, 6> ata = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> atb = Eigen::Matrix<double, 6, 1>::Zero();
    AffineMotionModel model;
    double row[6];
    for (int y = 0; y < h; ++y) {
        const double ny = norm_coord(y, h);
        for (int x = 0; x < w; ++x) {
            if (!bg_mask.at(x, y)) continue;
            basis_row(norm_coord(x, w), ny, ix.at(x, y), iy.at(x, y), row);
            for (int a = 0; a < 6; ++a) {
                for (int b = a; b < 6; ++b) ata(a, b) += row[a] * row[b];
                atb[a] += row[a] * it.at(x, y);
            }
            ++model.n_bg_pixels;
        }
    }
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < a; ++b) ata(a, b) = ata(b, a);

    if (model.n_bg_pixels < 6) {
        model.degenerate = true;
        return model;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(ata);
    const double emax = es.eigenvalues().maxCoeff();
    if (!(emax > 0.0) || es.eigenvalues().minCoeff() <= emax * 1e-12) {
        model.degenerate = true;
        return model;
    }
    model.params = ata.ldlt().solve(atb);
    return model;
}

ObjectSpread mask_spread(const SoftMask& mask, double threshold) {
    double total = 0.0, sx = 0.0, sy = 0.0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const double v = mask.at(x, y);
            if (v < threshold) continue;
            total += v;
            sx += v * x;
            sy += v * y;
        }
    }
    ObjectSpread spread;
    if (total <= 0.0) {  // no mass: fall back to an eighth of each dimension
        spread.std_x = mask.width / 8.0;
        spread.std_y = mask.height / 8.0;
        return spread;
    }
    const double mx = sx / total, my = sy / total;
    double vx = 0.0, vy = 0.0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const double v = mask.at(x, y);
            if (v < threshold) continue;
            vx += v * (x - mx) * (x - mx);
            vy += v * (y - my) * (y - my);
        }
    }
    spread.std_x = std::sqrt(vx / total);
    spread.std_y = std::sqrt(vy / total);
    return spread;
}

SoftMask motion_residual_mask(const AffineMotionModel& model, const SoftMask& ix,
                              const SoftMask& iy, const SoftMask& it, ObjectSpread object_spread,
                              double alpha, double clip_percentile) {
    const int w = ix.width, h = ix.height;
    SoftMask residual(w, h);
    double row[6];
    for (int y = 0; y < h; ++y) {
        const double ny = norm_coord(y, h);
        for (int x = 0; x < w; ++x) {
            basis_row(norm_coord(x, w), ny, ix.at(x, y), iy.at(x, y), row);
            double pred = 0.0;
            for (int a = 0; a < 6; ++a) pred += row[a] * model.params[a];
            residual.at(x, y) = std::abs(pred - it.at(x, y));
        }
    }
    const SoftMask normalized = normalize_unit(residual, clip_percentile);
    return gaussian_smooth(normalized, alpha * object_spread.std_x, alpha * object_spread.std_y);
}

SoftMask combine_masks(const SoftMask& appearance, const SoftMask& motion,
                       double clip_percentile) {
    if (appearance.width != motion.width || appearance.height != motion.height) {
        throw std::invalid_argument("mask dimensions differ");
    }
    SoftMask product(appearance.width, appearance.height);
    for (std::size_t i = 0; i < product.size(); ++i) {
        product.values[i] = appearance.values[i] * motion.values[i];
    }
    return normalize_unit(product, clip_percentile);
}

}  // namespace hppseg
