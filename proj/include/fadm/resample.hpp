#pragma once

#include "fadm/image.hpp"
#include "fadm/kernels.hpp"

namespace fadm {

/// Catmull-Rom resampling of every channel on a separable lattice given in
/// source pixel-index coordinates. Output is clamped to [0, 1].
Image resample_cubic(const Image& img, const kernels::Axis& xs, const kernels::Axis& ys);

/// Pixel-center aligned bicubic resize.
Image resize_bicubic(const Image& img, int width, int height);

/// Bicubic upsampling that inverts `downsample`: output pixel x maps to
/// source coordinate x / factor, so decimated samples land back on their
/// original positions.
Image upsample_decimated(const Image& lr, int factor, int width, int height);

}  // namespace fadm
