#pragma once

#include "hppseg/raster.hpp"

namespace hppseg {

// Separable Gaussian convolution with symmetric (edge-repeating) border
// reflection. Kernel truncated at 3 sigma and renormalized, so the mean of
// the field is preserved. sigma <= 0 is the identity.
SoftMask gaussian_smooth(const SoftMask& mask, double sigma);
SoftMask gaussian_smooth(const SoftMask& mask, double sigma_x, double sigma_y);

// Centered anisotropic Gaussian with peak value 1 at the image center.
SoftMask center_prior(int height, int width, double sigma_x, double sigma_y);

// Robust min-max mapping to [0,1]: values above the clip percentile saturate
// to 1. clip_percentile = 100 disables clipping. A constant field maps to
// all zeros.
SoftMask normalize_unit(const SoftMask& mask, double clip_percentile = 95.0);

// Linear-interpolation percentile of a sample, p in [0,100].
double percentile(const std::vector<double>& values, double p);

}  // namespace hppseg
