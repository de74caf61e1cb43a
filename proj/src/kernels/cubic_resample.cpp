#include <array>
#include <cmath>

#include "fadm/kernels.hpp"

namespace fadm::kernels {

double catmull_rom(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t < 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

namespace {

struct Taps {
  std::vector<std::array<int, 4>> index;
  std::vector<std::array<double, 4>> weight;
};

Taps make_taps(const Axis& axis, int n) {
  Taps taps;
  taps.index.resize(axis.count);
  taps.weight.resize(axis.count);
  for (int k = 0; k < axis.count; ++k) {
    const double pos = axis.origin + k * axis.step;
    const int i0 = static_cast<int>(std::floor(pos));
    const double f = pos - i0;
    for (int t = 0; t < 4; ++t) {
      int idx = i0 - 1 + t;
      if (idx < 0) idx = 0;
      if (idx > n - 1) idx = n - 1;
      taps.index[k][t] = idx;
      taps.weight[k][t] = catmull_rom(f - (t - 1));
    }
  }
  return taps;
}

// Horizontal pass for one source row into `tmp`, then vertical blend.
inline void horizontal(std::span<const double> src, int width, const Taps& tx, int row,
                       double* dst) {
  const double* s = &src[static_cast<std::size_t>(row) * width];
  for (std::size_t j = 0; j < tx.index.size(); ++j) {
    const auto& id = tx.index[j];
    const auto& w = tx.weight[j];
    dst[j] = s[id[0]] * w[0] + s[id[1]] * w[1] + s[id[2]] * w[2] + s[id[3]] * w[3];
  }
}

inline void vertical(const std::vector<double>& rows, int nx, const Taps& ty, int i, double* dst) {
  const auto& id = ty.index[i];
  const auto& w = ty.weight[i];
  for (int j = 0; j < nx; ++j) {
    dst[j] = rows[static_cast<std::size_t>(id[0]) * nx + j] * w[0] +
             rows[static_cast<std::size_t>(id[1]) * nx + j] * w[1] +
             rows[static_cast<std::size_t>(id[2]) * nx + j] * w[2] +
             rows[static_cast<std::size_t>(id[3]) * nx + j] * w[3];
  }
}

}  // namespace

void cubic_sample(std::span<const double> src, int width, int height, const Axis& xs,
                  const Axis& ys, std::span<double> out) {
  const Taps tx = make_taps(xs, width);
  const Taps ty = make_taps(ys, height);
  std::vector<double> rows(static_cast<std::size_t>(height) * xs.count);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    horizontal(src, width, tx, r, &rows[static_cast<std::size_t>(r) * xs.count]);
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < ys.count; ++i) {
    vertical(rows, xs.count, ty, i, &out[static_cast<std::size_t>(i) * xs.count]);
  }
}

namespace serial {
void cubic_sample(std::span<const double> src, int width, int height, const Axis& xs,
                  const Axis& ys, std::span<double> out) {
  const Taps tx = make_taps(xs, width);
  const Taps ty = make_taps(ys, height);
  std::vector<double> rows(static_cast<std::size_t>(height) * xs.count);
  for (int r = 0; r < height; ++r) {
    horizontal(src, width, tx, r, &rows[static_cast<std::size_t>(r) * xs.count]);
  }
  for (int i = 0; i < ys.count; ++i) {
    vertical(rows, xs.count, ty, i, &out[static_cast<std::size_t>(i) * xs.count]);
  }
}
}  // namespace serial

}  // namespace fadm::kernels
