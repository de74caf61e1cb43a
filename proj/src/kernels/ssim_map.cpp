#include <array>
#include <cmath>

#include "fadm/kernels.hpp"

namespace fadm::kernels {
namespace {

constexpr int kWin = 11;
constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2 with L = 1
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWin> gaussian_window() {
  std::array<double, kWin> w{};
  double sum = 0.0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - kWin / 2;
    w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Five windowed moments, horizontally filtered, for one image row.
struct Moments {
  std::vector<double> a, b, aa, bb, ab;
  explicit Moments(std::size_t n) : a(n), b(n), aa(n), bb(n), ab(n) {}
};

inline void horizontal_row(std::span<const double> a, std::span<const double> b, int width, int row,
                           const std::array<double, kWin>& w, Moments& m, std::size_t offset) {
  const int nx = width - kWin + 1;
  const double* pa = &a[static_cast<std::size_t>(row) * width];
  const double* pb = &b[static_cast<std::size_t>(row) * width];
  for (int x = 0; x < nx; ++x) {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int k = 0; k < kWin; ++k) {
      const double va = pa[x + k];
      const double vb = pb[x + k];
      sa += w[k] * va;
      sb += w[k] * vb;
      saa += w[k] * (va * va);
      sbb += w[k] * (vb * vb);
      sab += w[k] * (va * vb);
    }
    m.a[offset + x] = sa;
    m.b[offset + x] = sb;
    m.aa[offset + x] = saa;
    m.bb[offset + x] = sbb;
    m.ab[offset + x] = sab;
  }
}

inline double output_row(const Moments& m, int nx, int y, const std::array<double, kWin>& w) {
  double row_sum = 0.0;
  for (int x = 0; x < nx; ++x) {
    double ma = 0, mb = 0, maa = 0, mbb = 0, mab = 0;
    for (int k = 0; k < kWin; ++k) {
      const std::size_t i = static_cast<std::size_t>(y + k) * nx + x;
      ma += w[k] * m.a[i];
      mb += w[k] * m.b[i];
      maa += w[k] * m.aa[i];
      mbb += w[k] * m.bb[i];
      mab += w[k] * m.ab[i];
    }
    const double va = maa - ma * ma;
    const double vb = mbb - mb * mb;
    const double cov = mab - ma * mb;
    row_sum += ((2.0 * (ma * mb) + kC1) * (2.0 * cov + kC2)) /
               ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return row_sum;
}

}  // namespace

double ssim_mean(std::span<const double> a, std::span<const double> b, int width, int height) {
  const auto w = gaussian_window();
  const int nx = width - kWin + 1;
  const int ny = height - kWin + 1;
  Moments m(static_cast<std::size_t>(nx) * height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) horizontal_row(a, b, width, y, w, m, static_cast<std::size_t>(y) * nx);
  std::vector<double> rows(ny);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < ny; ++y) rows[y] = output_row(m, nx, y, w);
  double total = 0.0;
  for (double r : rows) total += r;
  return total / (static_cast<double>(nx) * ny);
}

namespace serial {
double ssim_mean(std::span<const double> a, std::span<const double> b, int width, int height) {
  const auto w = gaussian_window();
  const int nx = width - kWin + 1;
  const int ny = height - kWin + 1;
  Moments m(static_cast<std::size_t>(nx) * height);
  for (int y = 0; y < height; ++y) horizontal_row(a, b, width, y, w, m, static_cast<std::size_t>(y) * nx);
  std::vector<double> rows(ny);
  for (int y = 0; y < ny; ++y) rows[y] = output_row(m, nx, y, w);
  double total = 0.0;
  for (double r : rows) total += r;
  return total / (static_cast<double>(nx) * ny);
}
}  // namespace serial

}  // namespace fadm::kernels
