#include "fadm/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fadm/error.hpp"

namespace fadm {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0) throw InputError("image dimensions must be positive");
  if (channels != 1 && channels != 3) throw InputError("images have 1 or 3 channels");
  samples_.assign(plane_size() * static_cast<std::size_t>(channels), fill);
}

std::span<double> Image::channel(int c) {
  return std::span<double>(samples_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                             plane_size());
}

std::span<const double> Image::channel(int c) const {
  return std::span<const double>(samples_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                                   plane_size());
}

void Image::require_finite() const {
  for (double v : samples_) {
    if (!std::isfinite(v)) throw InputError("image contains non-finite samples");
  }
}

void Image::validate() const {
  for (double v : samples_) {
    if (!std::isfinite(v)) throw InputError("image contains non-finite samples");
    if (v < 0.0 || v > 1.0) throw InputError("image sample outside [0, 1]: " + std::to_string(v));
  }
}

void Image::clamp01() {
  for (double& v : samples_) v = std::clamp(v, 0.0, 1.0);
}

Image luminance(const Image& img) {
  if (img.channels() == 1) return img;
  Image out(img.width(), img.height(), 1);
  out.set_source_bit_depth(img.source_bit_depth());
  out.provenance = img.provenance;
  auto r = img.channel(0);
  auto g = img.channel(1);
  auto b = img.channel(2);
  auto y = out.channel(0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  }
  return out;
}

Image crop(const Image& img, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || w <= 0 || h <= 0 || x0 + w > img.width() || y0 + h > img.height()) {
    throw InputError("crop rectangle outside image");
  }
  Image out(w, h, img.channels());
  out.set_source_bit_depth(img.source_bit_depth());
  out.provenance = img.provenance;
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
    }
  }
  return out;
}

Image to_image(const RealGrid& grid) {
  Image out(grid.width, grid.height, 1);
  auto dst = out.channel(0);
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::clamp(grid.values[i], 0.0, 1.0);
  return out;
}

RealGrid to_grid(const Image& img, int channel) {
  RealGrid g(img.width(), img.height());
  auto src = img.channel(channel);
  std::copy(src.begin(), src.end(), g.values.begin());
  return g;
}

}  // namespace fadm
