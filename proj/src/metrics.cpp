#include "fadm/metrics.hpp"

#include <cmath>
#include <limits>

#include "fadm/error.hpp"
#include "fadm/kernels.hpp"

namespace fadm {

namespace {

void check_pair(const Image& a, const Image& b) {
  if (a.empty() || b.empty()) throw InputError("metrics: empty image");
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
    throw InputError("metrics: image dimensions differ");
  }
  a.require_finite();
  b.require_finite();
}

double psnr_of(std::span<const double> a, std::span<const double> b) {
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / (sse / static_cast<double>(a.size())));
}

double ssim_plane(std::span<const double> a, std::span<const double> b, int w, int h) {
  return kernels::ssim_mean(a, b, w, h);
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  check_pair(a, b);
  return psnr_of(a.samples(), b.samples());
}

double ssim(const Image& a, const Image& b, ColorMode mode) {
  check_pair(a, b);
  if (a.width() < 11 || a.height() < 11) throw InputError("ssim: images smaller than the 11x11 window");
  if (a.channels() == 1 || mode == ColorMode::luminance) {
    const Image ya = luminance(a);
    const Image yb = luminance(b);
    return ssim_plane(ya.channel(0), yb.channel(0), a.width(), a.height());
  }
  double sum = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    sum += ssim_plane(a.channel(c), b.channel(c), a.width(), a.height());
  }
  return sum / a.channels();
}

QualityReport evaluate_quality(const Image& a, const Image& b, ColorMode mode) {
  QualityReport r;
  r.psnr_db = psnr(a, b);
  r.ssim = ssim(a, b, mode);
  if (a.channels() > 1) {
    for (int c = 0; c < a.channels(); ++c) {
      r.per_channel.push_back({psnr_of(a.channel(c), b.channel(c)),
                               ssim_plane(a.channel(c), b.channel(c), a.width(), a.height())});
    }
  }
  return r;
}

}  // namespace fadm
