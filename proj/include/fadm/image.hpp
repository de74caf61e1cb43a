#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fadm/optics.hpp"

namespace fadm {

/// Where an image came from, when it was produced by the simulator or
/// loaded alongside camera metadata.
struct Provenance {
  CameraSpec camera;
  SceneGeometry geometry;
};

/// Planar floating-point image with samples normalized to [0, 1].
///
/// Channels are stored one plane after another; each plane is row-major.
/// Operations clamp at their outputs and `validate()` checks the invariant
/// at API boundaries, so intermediate math may leave the range freely.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels = 1, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return samples_.empty(); }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<double> channel(int c);
  std::span<const double> channel(int c) const;
  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  double& at(int x, int y, int c = 0) {
    return samples_[static_cast<std::size_t>(c) * plane_size() +
                    static_cast<std::size_t>(y) * width_ + x];
  }
  double at(int x, int y, int c = 0) const {
    return samples_[static_cast<std::size_t>(c) * plane_size() +
                    static_cast<std::size_t>(y) * width_ + x];
  }

  /// Bit depth of the file the image was decoded from (0 if synthetic).
  int source_bit_depth() const { return bit_depth_; }
  void set_source_bit_depth(int bits) { bit_depth_ = bits; }

  std::optional<Provenance> provenance;

  /// Throws InputError if any sample is non-finite or outside [0, 1].
  void validate() const;
  /// Throws InputError if any sample is non-finite.
  void require_finite() const;
  void clamp01();

  friend bool operator==(const Image& a, const Image& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.channels_ == b.channels_ && a.samples_ == b.samples_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  int bit_depth_ = 0;
  std::vector<double> samples_;
};

/// Dense real-valued grid (log spectra, transfer maps, object fields).
struct RealGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  RealGrid() = default;
  RealGrid(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// BT.601 luma of an RGB image; single-channel images are returned as is.
Image luminance(const Image& img);

/// Copy of the rectangle [x0, x0+w) x [y0, y0+h); throws InputError if it
/// does not fit.
Image crop(const Image& img, int x0, int y0, int w, int h);

/// Single-channel image holding grid values clamped to [0, 1].
Image to_image(const RealGrid& grid);

/// Grid view of one channel.
RealGrid to_grid(const Image& img, int channel = 0);

}  // namespace fadm
