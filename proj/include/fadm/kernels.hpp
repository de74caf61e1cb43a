#pragma once

// Data-parallel inner loops.
//
// Every kernel has an OpenMP version (namespace fadm::kernels) and a plain
// serial reference (fadm::kernels::serial) kept for testing and
// benchmarking. Both versions perform the same floating-point operations in
// the same order per output element, so their results are bit-identical for
// any thread count.

#include <complex>
#include <span>
#include <vector>

#include "fadm/image.hpp"

namespace fadm::kernels {

/// Polar lattice over a DC-centered grid: radius r samples frequency
/// r * bin_width (cycles/sample) at `angular_samples` equally spaced angles.
struct PolarLattice {
  int radial_bins = 0;
  int angular_samples = 360;
  double bin_width = 0.0;
  bool exponentiate_first = false;
};

/// Uniform sampling lattice: positions origin + k * step for k in [0, count).
struct Axis {
  double origin = 0.0;
  double step = 1.0;
  int count = 0;
};

/// Angular mean of bilinearly interpolated grid values per radius.
void polar_average(const RealGrid& grid, const PolarLattice& lattice, std::span<double> out);

/// In-place element-wise product of spectrum bins with a real gain map.
void multiply_gain(std::span<std::complex<double>> bins, std::span<const double> gain);

/// Bilinear samples of `src` (row-major, width x height) on the separable
/// lattice xs x ys, in grid index units. Writes ys.count rows of xs.count.
void bilinear_sample(const RealGrid& src, const Axis& xs, const Axis& ys, std::span<double> out);

/// Catmull-Rom (a = -0.5) samples of a row-major plane on the separable
/// lattice xs x ys; indices outside the plane are clamped to the border.
void cubic_sample(std::span<const double> src, int width, int height, const Axis& xs,
                  const Axis& ys, std::span<double> out);

/// Mean SSIM over all valid 11x11 Gaussian (sigma 1.5) window positions.
double ssim_mean(std::span<const double> a, std::span<const double> b, int width, int height);

namespace serial {
void polar_average(const RealGrid& grid, const PolarLattice& lattice, std::span<double> out);
void multiply_gain(std::span<std::complex<double>> bins, std::span<const double> gain);
void bilinear_sample(const RealGrid& src, const Axis& xs, const Axis& ys, std::span<double> out);
void cubic_sample(std::span<const double> src, int width, int height, const Axis& xs,
                  const Axis& ys, std::span<double> out);
double ssim_mean(std::span<const double> a, std::span<const double> b, int width, int height);
}  // namespace serial

/// Catmull-Rom kernel weight at offset t.
double catmull_rom(double t);

/// Threads used by the parallel kernels (omp_get_max_threads()).
int max_threads();
/// Sets the thread count for subsequent parallel regions.
void set_threads(int n);

}  // namespace fadm::kernels
