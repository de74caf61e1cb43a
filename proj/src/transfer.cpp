#include "fadm/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fadm/error.hpp"
#include "fadm/kernels.hpp"

namespace fadm {

RealGrid transfer_log_diff(const Image& hr, const Image& lr_matched, double eps) {
  if (hr.width() != lr_matched.width() || hr.height() != lr_matched.height() ||
      hr.channels() != lr_matched.channels()) {
    throw InputError("transfer_log_diff: HR and LR dimensions differ");
  }
  const RealGrid log_hr = log_magnitude(fft2(hr), eps);
  RealGrid out = log_magnitude(fft2(lr_matched), eps);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= log_hr.values[i];
  return out;
}

RadialProfile polar_radial_average(const RealGrid& grid, int radial_bins, int angular_samples,
                                   bool exponentiate_first) {
  const int limit = std::min(grid.width, grid.height) / 2;
  if (radial_bins <= 0 || radial_bins > limit) {
    throw InputError("polar_radial_average: radial_bins must be in [1, min(width, height)/2]");
  }
  if (angular_samples <= 0) throw InputError("polar_radial_average: angular_samples must be positive");
  RadialProfile profile;
  profile.values.assign(radial_bins, 0.0);
  profile.bin_width_cyc_per_sample = 0.5 / radial_bins;
  profile.angular_sample_count = angular_samples;
  const kernels::PolarLattice lattice{radial_bins, angular_samples,
                                      profile.bin_width_cyc_per_sample, exponentiate_first};
  kernels::polar_average(grid, lattice, profile.values);
  return profile;
}

TransferEstimate detect_cutoff(const RadialProfile& profile) {
  const int n = profile.radial_bin_count();
  if (n < 16) throw InputError("detect_cutoff: profile needs at least 16 bins");
  for (double v : profile.values) {
    if (!std::isfinite(v)) throw InputError("detect_cutoff: non-finite profile value");
  }
  std::vector<double> smooth(n);
  for (int r = 0; r < n; ++r) {
    const int lo = std::max(0, r - 2);
    const int hi = std::min(n - 1, r + 2);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) sum += profile.values[k];
    smooth[r] = sum / (hi - lo + 1);
  }
  double plateau = 0.0;
  for (int r = 1; r <= 8; ++r) plateau += smooth[r];
  plateau /= 8.0;
  const double threshold = plateau / std::sqrt(2.0);

  TransferEstimate est;
  est.profile = profile;
  est.plateau_level = plateau;
  est.cutoff_bin = n - 1;
  est.confidence = 0.0;
  for (int r = 1; r + 2 < n; ++r) {
    if (smooth[r] < threshold && smooth[r + 1] < threshold && smooth[r + 2] < threshold) {
      est.cutoff_bin = r;
      int below = 0;
      for (int k = r + 1; k < n; ++k) below += smooth[k] < threshold ? 1 : 0;
      est.confidence = static_cast<double>(below) / (n - 1 - r);
      break;
    }
  }
  est.cutoff_cyc_per_sample = est.cutoff_bin * profile.bin_width_cyc_per_sample;
  return est;
}

TransferEstimate estimate_pair_cutoff(const Image& hr, const Image& lr_matched,
                                      const EstimateOptions& opts) {
  if (hr.width() != lr_matched.width() || hr.height() != lr_matched.height()) {
    throw InputError("estimate_pair_cutoff: pair is not registered to equal size");
  }
  Image h = luminance(hr);
  Image l = luminance(lr_matched);
  if (opts.window) {
    h = apply_hann(h);
    l = apply_hann(l);
  }
  const RealGrid diff = transfer_log_diff(h, l, opts.eps);
  const int bins = opts.radial_bins > 0 ? opts.radial_bins : std::min(hr.width(), hr.height()) / 2;
  const RadialProfile profile =
      polar_radial_average(diff, bins, opts.angular_samples, opts.exponentiate_first);
  return detect_cutoff(profile);
}

void write_profile_csv(const RadialProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "radius_bin,freq_cyc_per_sample,value\n";
  for (int r = 0; r < profile.radial_bin_count(); ++r) {
    out << r << ',' << profile.frequency(r) << ',' << profile.values[r] << '\n';
  }
}

void write_estimate_json(const TransferEstimate& est, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const nlohmann::json j{{"cutoff_bin", est.cutoff_bin},
                         {"cutoff_cyc_per_sample", est.cutoff_cyc_per_sample},
                         {"plateau", est.plateau_level},
                         {"confidence", est.confidence}};
  out << j.dump(2) << '\n';
}

}  // namespace fadm
