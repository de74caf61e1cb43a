#include "fadm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fadm/error.hpp"
#include "fadm/kernels.hpp"

namespace fadm {
namespace {

enum class PlanKind { Forward, Inverse, RealForward, RealInverse };

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are created once per (kind, size) and reused.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(PlanKind kind, int width, int height) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(static_cast<int>(kind), width, height);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::Forward:
      case PlanKind::Inverse: {
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        plan = fftw_plan_dft_2d(height, width, in, out,
                                kind == PlanKind::Forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        fftw_free(in);
        fftw_free(out);
        break;
      }
      case PlanKind::RealForward:
      case PlanKind::RealInverse: {
        const std::size_t nh = static_cast<std::size_t>(width / 2 + 1) * height;
        auto* r = fftw_alloc_real(n);
        auto* c = fftw_alloc_complex(nh);
        plan = kind == PlanKind::RealForward ? fftw_plan_dft_r2c_2d(height, width, r, c, flags)
                                             : fftw_plan_dft_c2r_2d(height, width, c, r, flags);
        fftw_free(r);
        fftw_free(c);
        break;
      }
    }
    if (plan == nullptr) throw Error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

void check_size(int w, int h) {
  if (w < 8 || h < 8) throw InputError("fft2 requires width and height >= 8");
}

Spectrum forward_from(std::span<const double> values, int w, int h) {
  check_size(w, h);
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("fft2: non-finite input sample");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::complex<double>> in(values.begin(), values.end());
  std::vector<std::complex<double>> raw(n);
  fftw_execute_dft(PlanCache::instance().get(PlanKind::Forward, w, h), as_fftw(in.data()),
                   as_fftw(raw.data()));
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  Spectrum spec(w, h);
  for (int y = 0; y < h; ++y) {
    const int ry = wrap(y - h / 2, h);
    for (int x = 0; x < w; ++x) {
      spec.at(x, y) = raw[static_cast<std::size_t>(ry) * w + wrap(x - w / 2, w)] * norm;
    }
  }
  return spec;
}

}  // namespace

Spectrum fft2(const Image& img) {
  if (img.channels() != 1) throw InputError("fft2 expects a single-channel image");
  return forward_from(img.channel(0), img.width(), img.height());
}

Spectrum fft2(const RealGrid& grid) { return forward_from(grid.values, grid.width, grid.height); }

RealGrid ifft2_real(const Spectrum& spec) {
  const int w = spec.width;
  const int h = spec.height;
  check_size(w, h);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::complex<double>> raw(n);
  for (int y = 0; y < h; ++y) {
    const int ry = wrap(y - h / 2, h);
    for (int x = 0; x < w; ++x) raw[static_cast<std::size_t>(ry) * w + wrap(x - w / 2, w)] = spec.at(x, y);
  }
  std::vector<std::complex<double>> out(n);
  fftw_execute_dft(PlanCache::instance().get(PlanKind::Inverse, w, h), as_fftw(raw.data()),
                   as_fftw(out.data()));
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  RealGrid grid(w, h);
  double lo = INFINITY, hi = -INFINITY, max_imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = out[i].real() * norm;
    grid.values[i] = re;
    lo = std::min(lo, re);
    hi = std::max(hi, re);
    max_imag = std::max(max_imag, std::abs(out[i].imag() * norm));
  }
  double range = hi - lo;
  if (!(range > 0.0)) range = std::max(1.0, std::abs(hi));
  if (max_imag > 1e-6 * range) {
    throw SymmetryError("ifft2: spectrum is not Hermitian (imaginary residue " +
                        std::to_string(max_imag) + ")");
  }
  return grid;
}

Image ifft2(const Spectrum& spec) { return to_image(ifft2_real(spec)); }

RealGrid log_magnitude(const Spectrum& spec, double eps) {
  if (!(eps > 0.0)) throw InputError("log_magnitude: eps must be positive");
  RealGrid out(spec.width, spec.height);
  for (std::size_t i = 0; i < spec.bins.size(); ++i) out.values[i] = std::log(std::abs(spec.bins[i]) + eps);
  return out;
}

RealGrid hann_window(int width, int height) {
  auto taper = [](int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    return w;
  };
  const auto wx = taper(width);
  const auto wy = taper(height);
  RealGrid g(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) g.at(x, y) = wy[y] * wx[x];
  }
  return g;
}

Image apply_hann(const Image& img) {
  if (img.channels() != 1) throw InputError("apply_hann expects a single-channel image");
  const RealGrid w = hann_window(img.width(), img.height());
  Image out = img;
  auto px = out.channel(0);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] *= w.values[i];
  return out;
}

RealGrid filter_real(const RealGrid& grid, const std::function<double(double, double)>& gain) {
  const int w = grid.width;
  const int h = grid.height;
  check_size(w, h);
  const int hw = w / 2 + 1;
  std::vector<double> in = grid.values;
  std::vector<std::complex<double>> half(static_cast<std::size_t>(hw) * h);
  fftw_execute_dft_r2c(PlanCache::instance().get(PlanKind::RealForward, w, h), in.data(),
                       as_fftw(half.data()));
  const double scale = 1.0 / (static_cast<double>(w) * h);
#pragma omp parallel for schedule(static)
  for (int ky = 0; ky < h; ++ky) {
    const double v = bin_frequency(wrap(ky + h / 2, h), h);
    for (int kx = 0; kx < hw; ++kx) {
      const double u = bin_frequency(wrap(kx + w / 2, w), w);
      half[static_cast<std::size_t>(ky) * hw + kx] *= gain(u, v) * scale;
    }
  }
  RealGrid out(w, h);
  fftw_execute_dft_c2r(PlanCache::instance().get(PlanKind::RealInverse, w, h),
                       as_fftw(half.data()), out.values.data());
  return out;
}

}  // namespace fadm
