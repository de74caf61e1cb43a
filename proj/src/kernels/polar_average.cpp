#include <cmath>
#include <numbers>

#include <omp.h>

#include "fadm/kernels.hpp"

namespace fadm::kernels {
namespace {

struct Trig {
  std::vector<double> cos_t;
  std::vector<double> sin_t;
};

Trig angle_table(int n) {
  Trig t;
  t.cos_t.resize(n);
  t.sin_t.resize(n);
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n;
    t.cos_t[k] = std::cos(theta);
    t.sin_t[k] = std::sin(theta);
  }
  return t;
}

inline double bilinear_at(const RealGrid& g, double x, double y) {
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  if (x0 < 0) x0 = 0;
  if (y0 < 0) y0 = 0;
  if (x0 > g.width - 2) x0 = g.width - 2;
  if (y0 > g.height - 2) y0 = g.height - 2;
  const double fx = x - x0;
  const double fy = y - y0;
  const double* row0 = &g.values[static_cast<std::size_t>(y0) * g.width];
  const double* row1 = row0 + g.width;
  return (row0[x0] * (1.0 - fx) + row0[x0 + 1] * fx) * (1.0 - fy) +
         (row1[x0] * (1.0 - fx) + row1[x0 + 1] * fx) * fy;
}

inline double radius_mean(const RealGrid& g, const PolarLattice& lat, const Trig& trig, int r) {
  const double rho = r * lat.bin_width;
  const double cx = g.width / 2;
  const double cy = g.height / 2;
  double sum = 0.0;
  for (int k = 0; k < lat.angular_samples; ++k) {
    const double x = cx + rho * trig.cos_t[k] * g.width;
    const double y = cy + rho * trig.sin_t[k] * g.height;
    double v = bilinear_at(g, x, y);
    if (lat.exponentiate_first) v = std::exp(v);
    sum += v;
  }
  return sum / lat.angular_samples;
}

}  // namespace

void polar_average(const RealGrid& grid, const PolarLattice& lattice, std::span<double> out) {
  const Trig trig = angle_table(lattice.angular_samples);
#pragma omp parallel for schedule(dynamic, 4)
  for (int r = 0; r < lattice.radial_bins; ++r) out[r] = radius_mean(grid, lattice, trig, r);
}

namespace serial {
void polar_average(const RealGrid& grid, const PolarLattice& lattice, std::span<double> out) {
  const Trig trig = angle_table(lattice.angular_samples);
  for (int r = 0; r < lattice.radial_bins; ++r) out[r] = radius_mean(grid, lattice, trig, r);
}
}  // namespace serial

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace fadm::kernels
