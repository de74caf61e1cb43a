#include <cmath>

#include "fadm/kernels.hpp"

namespace fadm::kernels {
namespace {

inline void sample_row(const RealGrid& src, const Axis& xs, double y, double* dst) {
  int y0 = static_cast<int>(std::floor(y));
  if (y0 < 0) y0 = 0;
  if (y0 > src.height - 2) y0 = src.height - 2;
  const double fy = y - y0;
  const double* row0 = &src.values[static_cast<std::size_t>(y0) * src.width];
  const double* row1 = row0 + src.width;
  for (int j = 0; j < xs.count; ++j) {
    const double x = xs.origin + j * xs.step;
    int x0 = static_cast<int>(std::floor(x));
    if (x0 < 0) x0 = 0;
    if (x0 > src.width - 2) x0 = src.width - 2;
    const double fx = x - x0;
    dst[j] = (row0[x0] * (1.0 - fx) + row0[x0 + 1] * fx) * (1.0 - fy) +
             (row1[x0] * (1.0 - fx) + row1[x0 + 1] * fx) * fy;
  }
}

}  // namespace

void bilinear_sample(const RealGrid& src, const Axis& xs, const Axis& ys, std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < ys.count; ++i) {
    sample_row(src, xs, ys.origin + i * ys.step, &out[static_cast<std::size_t>(i) * xs.count]);
  }
}

namespace serial {
void bilinear_sample(const RealGrid& src, const Axis& xs, const Axis& ys, std::span<double> out) {
  for (int i = 0; i < ys.count; ++i) {
    sample_row(src, xs, ys.origin + i * ys.step, &out[static_cast<std::size_t>(i) * xs.count]);
  }
}
}  // namespace serial

}  // namespace fadm::kernels
