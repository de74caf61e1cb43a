#pragma once

// Forward LR synthesis: Butterworth low-pass on the HR grid, decimation by
// N, Gaussian read noise.

#include <cstdint>

#include <json.hpp>

#include "fadm/image.hpp"

namespace fadm {

struct ButterworthFilter {
  int order = 2;
  double cutoff_cyc_per_sample = 0.25;  // on the grid the filter is applied to
  int width = 0;
  int height = 0;

  void validate() const;
  /// Gain map in the DC-centered Spectrum layout.
  RealGrid gain_grid() const;
};

/// 1 / sqrt(1 + (rho / f_c)^(2 order)), rho = sqrt(u^2 + v^2).
double butterworth_gain(const ButterworthFilter& filter, double u, double v);

struct DegradationConfig {
  double cutoff_cyc_per_sample = 0.25;  // HR-grid cycles/sample
  int downsample_factor = 4;
  double noise_sigma = 1.0 / 255.0;
  int order = 2;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const DegradationConfig& cfg);
void from_json(const nlohmann::json& j, DegradationConfig& cfg);

/// Per-channel frequency-domain filtering; output clamped to [0, 1].
Image apply_filter(const Image& hr, const ButterworthFilter& filter);

/// Same operation without the final clamp (linear in the input).
RealGrid apply_filter_linear(const RealGrid& plane, const ButterworthFilter& filter);

struct Downsampled {
  Image image;
  int used_width = 0;   // HR region actually decimated (divisible by N)
  int used_height = 0;
  bool cropped = false;
};

/// Keeps samples (N i, N j). Dimensions not divisible by N are cropped to
/// the largest divisible top-left region first.
Downsampled downsample(const Image& img, int factor);

/// N x N box average, for comparison against decimation.
Image downsample_area(const Image& img, int factor);

/// Adds i.i.d. N(0, sigma^2) per sample and clamps; deterministic in seed.
Image add_read_noise(const Image& img, double sigma, std::uint64_t seed);

/// apply_filter -> downsample -> add_read_noise.
Image synthesize_lr(const Image& hr, const DegradationConfig& cfg);

/// Independent stream seed for item `index` of a batch seeded with `seed`
/// (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace fadm
