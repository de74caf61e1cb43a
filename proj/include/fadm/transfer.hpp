#pragma once

// Empirical transfer-function extraction from registered HR/LR pairs:
// log-spectrum difference, polar resampling with angular averaging and
// plateau-relative -3 dB cutoff detection.

#include <filesystem>
#include <vector>

#include "fadm/image.hpp"
#include "fadm/spectral.hpp"

namespace fadm {

struct RadialProfile {
  std::vector<double> values;  // one per radial bin, >= 0 for transfer profiles
  double bin_width_cyc_per_sample = 0.0;
  int angular_sample_count = 0;

  int radial_bin_count() const { return static_cast<int>(values.size()); }
  double frequency(int bin) const { return bin * bin_width_cyc_per_sample; }
};

struct TransferEstimate {
  RadialProfile profile;
  int cutoff_bin = 0;
  double cutoff_cyc_per_sample = 0.0;
  double plateau_level = 0.0;
  double confidence = 0.0;
};

struct EstimateOptions {
  double eps = 1e-8;
  int radial_bins = 0;  // 0: min(width, height) / 2
  int angular_samples = 360;
  bool window = true;
  bool exponentiate_first = true;
};

/// ln|F(lr)| - ln|F(hr)| per bin (single-channel, equal-size inputs). The
/// caller applies any window beforehand.
RealGrid transfer_log_diff(const Image& hr, const Image& lr_matched, double eps);

/// Polar resampling of a DC-centered grid with bilinear interpolation and
/// per-radius angular mean. Radius r samples frequency r * 0.5/radial_bins.
/// With exponentiate_first the grid is exponentiated before averaging.
RadialProfile polar_radial_average(const RealGrid& grid, int radial_bins, int angular_samples,
                                   bool exponentiate_first);

/// Plateau-relative -3 dB crossing of a transfer profile (>= 16 bins).
///
/// The profile is smoothed with a centered 5-bin moving average (truncated
/// at the ends); the plateau is the mean of smoothed bins 1..8; the cutoff
/// is the first bin whose smoothed value and the next two lie below
/// plateau/sqrt(2). Confidence is the fraction of later bins that stay
/// below. A profile that never crosses reports the last bin, confidence 0.
TransferEstimate detect_cutoff(const RadialProfile& profile);

/// window -> fft2 -> log difference -> exp + angular mean -> cutoff.
/// RGB inputs are reduced to BT.601 luminance first.
TransferEstimate estimate_pair_cutoff(const Image& hr, const Image& lr_matched,
                                      const EstimateOptions& opts = {});

/// CSV `radius_bin,freq_cyc_per_sample,value`.
void write_profile_csv(const RadialProfile& profile, const std::filesystem::path& path);
/// JSON `{cutoff_bin, cutoff_cyc_per_sample, plateau, confidence}`.
void write_estimate_json(const TransferEstimate& est, const std::filesystem::path& path);

}  // namespace fadm
