#include "fadm/resample.hpp"

#include <algorithm>

#include "fadm/error.hpp"

namespace fadm {

Image resample_cubic(const Image& img, const kernels::Axis& xs, const kernels::Axis& ys) {
  if (xs.count <= 0 || ys.count <= 0) throw InputError("resample_cubic: empty output lattice");
  Image out(xs.count, ys.count, img.channels());
  out.set_source_bit_depth(img.source_bit_depth());
  for (int c = 0; c < img.channels(); ++c) {
    kernels::cubic_sample(img.channel(c), img.width(), img.height(), xs, ys, out.channel(c));
  }
  out.clamp01();
  return out;
}

Image resize_bicubic(const Image& img, int width, int height) {
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  return resample_cubic(img, {0.5 * sx - 0.5, sx, width}, {0.5 * sy - 0.5, sy, height});
}

Image upsample_decimated(const Image& lr, int factor, int width, int height) {
  if (factor < 1) throw InputError("upsample_decimated: factor must be >= 1");
  const double step = 1.0 / factor;
  return resample_cubic(lr, {0.0, step, width}, {0.0, step, height});
}

}  // namespace fadm
