#pragma once

#include <Eigen/Core>

#include "hppseg/raster.hpp"

namespace hppseg {

struct Derivatives {
    SoftMask ix;  // d/dx of the first frame, central differences
    SoftMask iy;  // d/dy
    SoftMask it;  // second frame minus first
};

// Spatial derivatives of frame_t (reflected borders) and the temporal
// difference frame_t1 - frame_t. Inputs are grayscale rasters of equal size.
Derivatives image_derivatives(const SoftMask& frame_t, const SoftMask& frame_t1);

// Six-parameter affine background-motion model fitted to the brightness
// constancy residual. Row layout per pixel: [Ix, Iy, x*Ix, y*Ix, x*Iy, y*Iy]
// with coordinates normalized to [-1,1] per axis.
struct AffineMotionModel {
    Eigen::Matrix<double, 6, 1> params = Eigen::Matrix<double, 6, 1>::Zero();
    int frame_index = 0;
    long long n_bg_pixels = 0;
    bool degenerate = false;
};

// Least-squares fit over the pixels selected by bg_mask. Fits with fewer
// than 6 pixels or rank-deficient geometry come back flagged degenerate with
// a zero model.
AffineMotionModel fit_affine_background(const SoftMask& ix, const SoftMask& iy, const SoftMask& it,
                                        const BinaryMask& bg_mask);

struct ObjectSpread {
    double std_x = 0.0;
    double std_y = 0.0;
};

// Weighted standard deviation of a soft mask's mass along each axis,
// restricted to pixels at or above `threshold` (0 uses all mass). Falls back
// to an eighth of each dimension when nothing qualifies.
ObjectSpread mask_spread(const SoftMask& mask, double threshold = 0.0);

// |model residual| at every pixel, normalized to [0,1] (clip percentile as
// in normalize_unit), then smoothed anisotropically with sigma =
// alpha * spread per axis.
SoftMask motion_residual_mask(const AffineMotionModel& model, const SoftMask& ix,
                              const SoftMask& iy, const SoftMask& it, ObjectSpread object_spread,
                              double alpha = 1.0, double clip_percentile = 95.0);

// Pointwise product of the two pathways, renormalized.
SoftMask combine_masks(const SoftMask& appearance, const SoftMask& motion,
                       double clip_percentile = 95.0);

}  // namespace hppseg
