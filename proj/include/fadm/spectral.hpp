#pragma once

// Unitary 2-D DFT with a DC-centered bin layout.
//
// Bin (i, j) of a width x height spectrum holds horizontal frequency
// (i - width/2) / width and vertical frequency (j - height/2) / height, in
// cycles/sample (integer division for the centre).

#include <complex>
#include <functional>
#include <vector>

#include "fadm/image.hpp"

namespace fadm {

struct Spectrum {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> bins;

  Spectrum() = default;
  Spectrum(int w, int h) : width(w), height(h), bins(static_cast<std::size_t>(w) * h) {}

  std::complex<double>& at(int x, int y) { return bins[static_cast<std::size_t>(y) * width + x]; }
  const std::complex<double>& at(int x, int y) const {
    return bins[static_cast<std::size_t>(y) * width + x];
  }
  double freq_step_x() const { return 1.0 / width; }
  double freq_step_y() const { return 1.0 / height; }
  int dc_x() const { return width / 2; }
  int dc_y() const { return height / 2; }
};

/// Signed frequency (cycles/sample) of centered bin `index` on an axis of n.
inline double bin_frequency(int index, int n) {
  return static_cast<double>(index - n / 2) / static_cast<double>(n);
}

/// Forward transform of a single-channel image (width, height >= 8).
/// Throws InputError on multi-channel input, tiny sizes or non-finite pixels.
Spectrum fft2(const Image& img);
Spectrum fft2(const RealGrid& grid);

/// Inverse transform. Imaginary parts below 1e-6 of the real dynamic range
/// are discarded; larger residue raises SymmetryError.
RealGrid ifft2_real(const Spectrum& spec);

/// Inverse transform clamped into an image.
Image ifft2(const Spectrum& spec);

/// ln(|bin| + eps) per bin, same layout as the spectrum.
RealGrid log_magnitude(const Spectrum& spec, double eps);

/// Separable periodic Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / N).
RealGrid hann_window(int width, int height);

/// Single-channel image multiplied by the Hann window.
Image apply_hann(const Image& img);

/// Real-to-real frequency-domain filter: multiplies the spectrum of `grid`
/// by gain(u, v) with u, v in cycles/sample and transforms back. Uses a
/// half-spectrum transform, so gain must satisfy gain(-u,-v) = gain(u,v).
RealGrid filter_real(const RealGrid& grid, const std::function<double(double, double)>& gain);

}  // namespace fadm
