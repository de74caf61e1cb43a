#pragma once

// Full-reference quality metrics. Pixel values are in [0, 1], so the peak
// signal is 1.

#include <vector>

#include "fadm/image.hpp"

namespace fadm {

/// PSNR in dB over all samples; +infinity for identical inputs.
double psnr(const Image& a, const Image& b);

enum class ColorMode {
  luminance,    // RGB reduced to BT.601 luma first
  per_channel,  // mean over channels
};

/// Mean SSIM (11x11 Gaussian window, sigma 1.5, K1 0.01, K2 0.03) over all
/// valid window positions. Both dimensions must be at least 11.
double ssim(const Image& a, const Image& b, ColorMode mode = ColorMode::luminance);

struct ChannelQuality {
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::vector<ChannelQuality> per_channel;  // filled for multi-channel input
};

QualityReport evaluate_quality(const Image& a, const Image& b,
                               ColorMode mode = ColorMode::luminance);

}  // namespace fadm
