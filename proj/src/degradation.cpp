#include "fadm/degradation.hpp"

#include <cmath>
#include <random>

#include "fadm/error.hpp"
#include "fadm/kernels.hpp"
#include "fadm/spectral.hpp"

namespace fadm {

void ButterworthFilter::validate() const {
  if (order < 1) throw InputError("Butterworth order must be >= 1");
  if (!(cutoff_cyc_per_sample > 0.0 && cutoff_cyc_per_sample <= 0.5)) {
    throw InputError("Butterworth cutoff must lie in (0, 0.5] cycles/sample");
  }
  if (width <= 0 || height <= 0) throw InputError("Butterworth filter grid has no size");
}

double butterworth_gain(const ButterworthFilter& filter, double u, double v) {
  const double rho = std::sqrt(u * u + v * v);
  return 1.0 / std::sqrt(1.0 + std::pow(rho / filter.cutoff_cyc_per_sample, 2 * filter.order));
}

RealGrid ButterworthFilter::gain_grid() const {
  validate();
  RealGrid g(width, height);
  for (int y = 0; y < height; ++y) {
    const double v = bin_frequency(y, height);
    for (int x = 0; x < width; ++x) g.at(x, y) = butterworth_gain(*this, bin_frequency(x, width), v);
  }
  return g;
}

void DegradationConfig::validate() const {
  if (!(cutoff_cyc_per_sample > 0.0 && cutoff_cyc_per_sample <= 0.5)) {
    throw ConfigError("degradation cutoff must lie in (0, 0.5]");
  }
  if (downsample_factor < 1) throw ConfigError("downsample_factor must be >= 1");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be non-negative");
  if (order < 1) throw ConfigError("filter order must be >= 1");
}

void to_json(nlohmann::json& j, const DegradationConfig& cfg) {
  j = nlohmann::json{{"cutoff_cyc_per_sample", cfg.cutoff_cyc_per_sample},
                     {"downsample_factor", cfg.downsample_factor},
                     {"noise_sigma", cfg.noise_sigma},
                     {"order", cfg.order},
                     {"rng_seed", cfg.rng_seed}};
}

void from_json(const nlohmann::json& j, DegradationConfig& cfg) {
  try {
    DegradationConfig d;
    cfg.cutoff_cyc_per_sample = j.value("cutoff_cyc_per_sample", d.cutoff_cyc_per_sample);
    cfg.downsample_factor = j.value("downsample_factor", d.downsample_factor);
    cfg.noise_sigma = j.value("noise_sigma", d.noise_sigma);
    cfg.order = j.value("order", d.order);
    cfg.rng_seed = j.value("rng_seed", d.rng_seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("degradation config: ") + e.what());
  }
  cfg.validate();
}

RealGrid apply_filter_linear(const RealGrid& plane, const ButterworthFilter& filter) {
  if (filter.width != plane.width || filter.height != plane.height) {
    throw InputError("apply_filter: filter grid does not match image dimensions");
  }
  const RealGrid gain = filter.gain_grid();
  Spectrum spec = fft2(plane);
  kernels::multiply_gain(spec.bins, gain.values);
  return ifft2_real(spec);
}

Image apply_filter(const Image& hr, const ButterworthFilter& filter) {
  if (filter.width != hr.width() || filter.height != hr.height()) {
    throw InputError("apply_filter: filter grid does not match image dimensions");
  }
  hr.require_finite();
  const RealGrid gain = filter.gain_grid();
  Image out(hr.width(), hr.height(), hr.channels());
  out.set_source_bit_depth(hr.source_bit_depth());
  out.provenance = hr.provenance;
  for (int c = 0; c < hr.channels(); ++c) {
    Spectrum spec = fft2(to_grid(hr, c));
    kernels::multiply_gain(spec.bins, gain.values);
    const RealGrid plane = ifft2_real(spec);
    std::copy(plane.values.begin(), plane.values.end(), out.channel(c).begin());
  }
  out.clamp01();
  return out;
}

Downsampled downsample(const Image& img, int factor) {
  if (factor < 1) throw InputError("downsample factor must be >= 1");
  Downsampled d;
  d.used_width = img.width() / factor * factor;
  d.used_height = img.height() / factor * factor;
  if (d.used_width == 0 || d.used_height == 0) throw InputError("image smaller than downsample factor");
  d.cropped = d.used_width != img.width() || d.used_height != img.height();
  const int w = d.used_width / factor;
  const int h = d.used_height / factor;
  d.image = Image(w, h, img.channels());
  d.image.set_source_bit_depth(img.source_bit_depth());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) d.image.at(x, y, c) = img.at(x * factor, y * factor, c);
    }
  }
  return d;
}

Image downsample_area(const Image& img, int factor) {
  if (factor < 1) throw InputError("downsample factor must be >= 1");
  const int w = img.width() / factor;
  const int h = img.height() / factor;
  if (w == 0 || h == 0) throw InputError("image smaller than downsample factor");
  Image out(w, h, img.channels());
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double sum = 0.0;
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) sum += img.at(x * factor + dx, y * factor + dy, c);
        }
        out.at(x, y, c) = sum * inv;
      }
    }
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Image add_read_noise(const Image& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InputError("noise sigma must be non-negative");
  Image out = img;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : out.samples()) v += noise(rng);
  out.clamp01();
  return out;
}

Image synthesize_lr(const Image& hr, const DegradationConfig& cfg) {
  cfg.validate();
  const ButterworthFilter filter{cfg.order, cfg.cutoff_cyc_per_sample, hr.width(), hr.height()};
  const Image filtered = apply_filter(hr, filter);
  const Downsampled lr = downsample(filtered, cfg.downsample_factor);
  return add_read_noise(lr.image, cfg.noise_sigma, cfg.rng_seed);
}

}  // namespace fadm
