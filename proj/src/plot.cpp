#include "fadm/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "fadm/image_io.hpp"

namespace fadm {
namespace {

using Rgb = std::array<double, 3>;

class Canvas {
 public:
  Canvas(int w, int h) : img_(w, h, 3, 1.0) {}

  void put(int x, int y, const Rgb& c) {
    if (x < 0 || y < 0 || x >= img_.width() || y >= img_.height()) return;
    for (int k = 0; k < 3; ++k) img_.at(x, y, k) = c[k];
  }

  // Bresenham; `dash` > 0 skips every other run of that many pixels.
  void line(int x0, int y0, int x1, int y1, const Rgb& c, int dash = 0) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (int step = 0;; ++step) {
      if (dash == 0 || (step / dash) % 2 == 0) put(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  Image take() { return std::move(img_); }

 private:
  Image img_;
};

}  // namespace

Image render_profile_plot(const TransferEstimate& est, int width, int height) {
  constexpr int margin = 40;
  Canvas canvas(width, height);
  const Rgb black{0, 0, 0}, gray{0.6, 0.6, 0.6}, blue{0.1, 0.3, 0.9}, red{0.85, 0.1, 0.1};
  const int x_lo = margin, x_hi = width - margin / 2;
  const int y_lo = height - margin, y_hi = margin / 2;
  canvas.line(x_lo, y_lo, x_hi, y_lo, black);
  canvas.line(x_lo, y_lo, x_lo, y_hi, black);

  const auto& v = est.profile.values;
  const int n = static_cast<int>(v.size());
  if (n < 2) return canvas.take();
  double top = 1.25 * std::max(est.plateau_level, 1e-12);
  top = std::max(top, std::min(*std::max_element(v.begin(), v.end()), 2.0 * top));
  auto px = [&](int bin) { return x_lo + static_cast<int>(std::lround((x_hi - x_lo) * double(bin) / (n - 1))); };
  auto py = [&](double value) {
    const double t = std::clamp(value / top, 0.0, 1.0);
    return y_lo - static_cast<int>(std::lround((y_lo - y_hi) * t));
  };

  // Tick marks every 0.1 cycles/sample.
  for (double f = 0.0; f <= 0.5 + 1e-12; f += 0.1) {
    const int x = px(static_cast<int>(std::lround(f / est.profile.bin_width_cyc_per_sample)));
    canvas.line(x, y_lo, x, y_lo + 5, black);
  }
  const int th = py(est.plateau_level / std::sqrt(2.0));
  canvas.line(x_lo, th, x_hi, th, gray, 4);
  const int xc = px(est.cutoff_bin);
  canvas.line(xc, y_lo, xc, y_hi, red, 3);
  for (int r = 1; r < n; ++r) canvas.line(px(r - 1), py(v[r - 1]), px(r), py(v[r]), blue);
  return canvas.take();
}

void write_profile_plot(const TransferEstimate& est, const std::filesystem::path& path) {
  write_png(render_profile_plot(est), path);
}

}  // namespace fadm
