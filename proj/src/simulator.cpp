#include "fadm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "fadm/degradation.hpp"
#include "fadm/error.hpp"
#include "fadm/kernels.hpp"
#include "fadm/resample.hpp"
#include "fadm/spectral.hpp"

namespace fadm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double interval_mm(const CameraSpec& cam, const SceneGeometry& geom) {
  return sampling_model(cam, geom).object_sampling_interval_mm;
}

// LR pixels on each side of the optical axis needed to resample the HR
// window with a 4-tap kernel.
int lr_half_extent(int hr_extent, double dx_hr, double dx_lr) {
  return static_cast<int>(std::ceil((hr_extent / 2) * dx_hr / dx_lr)) + 3;
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

}  // namespace

void SceneSpec::validate() const {
  if (size_px < 128) throw ConfigError("scene size_px must be at least 128");
  check_positive(physical_extent_mm, "scene physical_extent_mm");
  switch (pattern) {
    case ScenePattern::siemens_star:
      if (spokes < 1) throw ConfigError("siemens star needs at least one spoke");
      break;
    case ScenePattern::zone_plate:
      check_positive(k_rad_per_mm2, "zone plate k");
      break;
    case ScenePattern::checkerboard:
      if (cell_px < 1) throw ConfigError("checkerboard cell_px must be positive");
      break;
    case ScenePattern::white_noise:
      if (!(corner_cyc_per_mm >= 0.0)) throw ConfigError("noise corner must be >= 0");
      break;
  }
}

ObjectField render_scene(const SceneSpec& spec) {
  spec.validate();
  const int n = spec.size_px;
  ObjectField field;
  field.pitch_mm = spec.pitch_mm();
  field.values = RealGrid(n, n);
  const double c = n / 2;
  auto coord = [&](int i) { return (i - c) * field.pitch_mm; };

  switch (spec.pattern) {
    case ScenePattern::siemens_star:
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double s = std::sin(spec.spokes * std::atan2(coord(y), coord(x)));
          const bool centre = x == n / 2 && y == n / 2;
          field.values.at(x, y) = centre ? 0.5 : (s > 0.0 ? 1.0 : (s < 0.0 ? 0.0 : 0.5));
        }
      }
      break;
    case ScenePattern::zone_plate:
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double r2 = coord(x) * coord(x) + coord(y) * coord(y);
          field.values.at(x, y) = 0.5 + 0.5 * std::cos(spec.k_rad_per_mm2 * r2);
        }
      }
      break;
    case ScenePattern::checkerboard:
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
          field.values.at(x, y) = ((x / spec.cell_px + y / spec.cell_px) % 2) ? 1.0 : 0.0;
      break;
    case ScenePattern::white_noise: {
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double& v : field.values.values) v = normal(rng);
      if (spec.corner_cyc_per_mm > 0.0) {
        const double pitch = field.pitch_mm;
        const double corner = spec.corner_cyc_per_mm;
        field.values = filter_real(field.values, [pitch, corner](double u, double v) {
          const double rho = std::sqrt(u * u + v * v) / pitch;
          return 1.0 / (1.0 + (rho / corner) * (rho / corner));
        });
      }
      double mean = 0.0;
      for (double v : field.values.values) mean += v;
      mean /= static_cast<double>(field.values.values.size());
      double var = 0.0;
      for (double v : field.values.values) var += (v - mean) * (v - mean);
      const double sd = std::sqrt(var / static_cast<double>(field.values.values.size()));
      for (double& v : field.values.values) {
        v = std::clamp(0.5 + 0.15 * (v - mean) / (sd > 0.0 ? sd : 1.0), 0.0, 1.0);
      }
      break;
    }
  }
  return field;
}

PsfModel PsfModel::delta() { return {}; }

PsfModel PsfModel::gaussian(double sigma_mm, double reference_distance_mm, double axial_exponent) {
  PsfModel p;
  p.kind = Kind::gaussian;
  p.sigma_mm_at_reference = sigma_mm;
  p.reference_distance_mm = reference_distance_mm;
  p.axial_exponent = axial_exponent;
  p.validate();
  return p;
}

PsfModel PsfModel::butterworth(double cutoff_cyc_per_mm, int order, double reference_distance_mm,
                               double axial_exponent) {
  PsfModel p;
  p.kind = Kind::butterworth;
  p.cutoff_cyc_per_mm_at_reference = cutoff_cyc_per_mm;
  p.order = order;
  p.reference_distance_mm = reference_distance_mm;
  p.axial_exponent = axial_exponent;
  p.validate();
  return p;
}

PsfModel PsfModel::matched(const CameraSpec& camera, double reference_distance_mm, double kappa,
                           int order) {
  check_positive(kappa, "kappa");
  const auto m = sampling_model(camera, {reference_distance_mm, 0.0});
  return butterworth(kappa * m.object_sampling_freq_cyc_per_mm, order, reference_distance_mm);
}

void PsfModel::validate() const {
  check_positive(reference_distance_mm, "PSF reference distance");
  if (!std::isfinite(axial_exponent)) throw ConfigError("PSF axial exponent must be finite");
  if (kind == Kind::gaussian) {
    if (!(sigma_mm_at_reference >= 0.0) || !std::isfinite(sigma_mm_at_reference)) {
      throw ConfigError("gaussian PSF sigma must be >= 0");
    }
  } else {
    check_positive(cutoff_cyc_per_mm_at_reference, "butterworth PSF cutoff");
    if (order < 1) throw ConfigError("butterworth PSF order must be >= 1");
  }
}

double PsfModel::transfer(double rho, double distance_mm) const {
  const double scale = std::pow(distance_mm / reference_distance_mm, axial_exponent);
  if (kind == Kind::gaussian) {
    const double sigma = sigma_mm_at_reference * scale;
    return std::exp(-2.0 * std::numbers::pi * std::numbers::pi * sigma * sigma * rho * rho);
  }
  const double fc = cutoff_cyc_per_mm_at_reference / scale;
  return 1.0 / std::sqrt(1.0 + std::pow(rho / fc, 2 * order));
}

double PsfModel::cutoff_cyc_per_mm(double distance_mm) const {
  const double scale = std::pow(distance_mm / reference_distance_mm, axial_exponent);
  if (kind == Kind::gaussian) {
    if (sigma_mm_at_reference == 0.0) return kInf;
    return std::sqrt(std::log(2.0)) / (2.0 * std::numbers::pi * sigma_mm_at_reference * scale);
  }
  return cutoff_cyc_per_mm_at_reference / scale;
}

void to_json(nlohmann::json& j, const PsfModel& psf) {
  if (psf.kind == PsfModel::Kind::gaussian) {
    j = {{"kind", "gaussian"}, {"sigma_mm_at_reference", psf.sigma_mm_at_reference}};
  } else {
    j = {{"kind", "butterworth"},
         {"cutoff_cyc_per_mm_at_reference", psf.cutoff_cyc_per_mm_at_reference},
         {"order", psf.order}};
  }
  j["reference_distance_mm"] = psf.reference_distance_mm;
  j["axial_exponent"] = psf.axial_exponent;
}

void from_json(const nlohmann::json& j, PsfModel& psf) {
  const std::string kind = j.at("kind").get<std::string>();
  psf = PsfModel{};
  if (kind == "gaussian") {
    psf.kind = PsfModel::Kind::gaussian;
    psf.sigma_mm_at_reference = j.value("sigma_mm_at_reference", 0.0);
  } else if (kind == "butterworth") {
    psf.kind = PsfModel::Kind::butterworth;
    psf.cutoff_cyc_per_mm_at_reference = j.at("cutoff_cyc_per_mm_at_reference").get<double>();
    psf.order = j.value("order", 2);
  } else {
    throw ConfigError("unknown PSF kind '" + kind + "'");
  }
  psf.reference_distance_mm = j.value("reference_distance_mm", 1.0);
  psf.axial_exponent = j.value("axial_exponent", 1.0);
  psf.validate();
}

Image capture(const ObjectField& object, const CameraSpec& camera, const SceneGeometry& geom,
              const PsfModel& psf, const CaptureOptions& opts) {
  camera.validate();
  geom.validate();
  psf.validate();
  const int w = opts.window.width > 0 ? opts.window.width : camera.sensor_width_px;
  const int h = opts.window.height > 0 ? opts.window.height : camera.sensor_height_px;
  if (w > camera.sensor_width_px || h > camera.sensor_height_px) {
    throw InputError("capture window exceeds the " + camera.name + " sensor");
  }
  if (!(object.pitch_mm > 0.0) || object.values.width < 2 || object.values.height < 2) {
    throw InputError("capture: empty object field");
  }
  const double dx = interval_mm(camera, geom);
  const double step = dx / object.pitch_mm;
  const kernels::Axis xs{object.values.width / 2 - (w / 2) * step, step, w};
  const kernels::Axis ys{object.values.height / 2 - (h / 2) * step, step, h};
  const double tol = 1e-9;
  if (xs.origin < -tol || ys.origin < -tol ||
      xs.origin + (w - 1) * step > object.values.width - 1 + tol ||
      ys.origin + (h - 1) * step > object.values.height - 1 + tol) {
    throw InputError("capture: field of view exceeds the object field");
  }

  std::vector<double> samples(static_cast<std::size_t>(w) * h);
  const double s = geom.object_distance_mm;
  if (psf.is_identity()) {
    kernels::bilinear_sample(object.values, xs, ys, samples);
  } else {
    const double pitch = object.pitch_mm;
    const RealGrid blurred = filter_real(object.values, [&psf, pitch, s](double u, double v) {
      return psf.transfer(std::sqrt(u * u + v * v) / pitch, s);
    });
    kernels::bilinear_sample(blurred, xs, ys, samples);
  }

  Image img(w, h, 1);
  std::copy(samples.begin(), samples.end(), img.samples().begin());
  if (opts.noise_sigma > 0.0) {
    img = add_read_noise(img, opts.noise_sigma, opts.seed);
  } else {
    img.clamp01();
  }
  img.provenance = Provenance{camera, geom};
  return img;
}

FieldLayout field_layout(const CameraSpec& cam_hr, const CameraSpec& cam_lr,
                         const PairGeometry& geom, const CaptureWindow& hr_window,
                         int oversample) {
  if (oversample < 1) throw ConfigError("oversample must be >= 1");
  const double dx_hr = interval_mm(cam_hr, geom.hr);
  const double dx_lr = interval_mm(cam_lr, geom.lr);
  const int extent = std::max(hr_window.width, hr_window.height);
  const double hr_half = (extent / 2 + 1) * dx_hr;
  const double lr_half = (lr_half_extent(extent, dx_hr, dx_lr) + 2) * dx_lr;
  FieldLayout layout;
  layout.pitch_mm = std::min(dx_hr, dx_lr) / oversample;
  const int half = static_cast<int>(std::ceil(std::max(hr_half, lr_half) / layout.pitch_mm)) + 2;
  layout.size_px = std::max(128, 2 * half);
  return layout;
}

double pair_ground_truth(const CameraSpec& cam_hr, const CameraSpec& cam_lr,
                         const PairGeometry& geom, const PsfModel& psf_hr,
                         const PsfModel& psf_lr) {
  psf_hr.validate();
  psf_lr.validate();
  const double dx_hr = interval_mm(cam_hr, geom.hr);
  const double dx_lr = interval_mm(cam_lr, geom.lr);
  const double s_hr = geom.hr.object_distance_mm;
  const double s_lr = geom.lr.object_distance_mm;
  const double nyquist_lr = 0.5 / dx_lr;

  double optics = kInf;
  if (psf_hr.is_identity()) {
    optics = psf_lr.cutoff_cyc_per_mm(s_lr);
  } else if (!psf_lr.is_identity()) {
    // first -3 dB crossing of |P_lr / P_hr|
    const double target = 1.0 / std::sqrt(2.0);
    auto ratio = [&](double rho) { return psf_lr.transfer(rho, s_lr) / psf_hr.transfer(rho, s_hr); };
    const double top = 16.0 * std::max(nyquist_lr, 0.5 / dx_hr);
    const int steps = 4096;
    double prev = 0.0;
    for (int i = 1; i <= steps; ++i) {
      const double rho = top * i / steps;
      if (ratio(rho) < target) {
        double lo = prev, hi = rho;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          (ratio(mid) < target ? hi : lo) = mid;
        }
        optics = 0.5 * (lo + hi);
        break;
      }
      prev = rho;
    }
  }
  return std::min(0.5, std::min(optics, nyquist_lr) * dx_hr);
}

CapturePair make_pair(const ObjectField& object, const CameraSpec& cam_hr,
                      const CameraSpec& cam_lr, const PairGeometry& geom, const PsfModel& psf_hr,
                      const PsfModel& psf_lr, const PairOptions& opts) {
  const double dx_hr = interval_mm(cam_hr, geom.hr);
  const double dx_lr = interval_mm(cam_lr, geom.lr);
  if (!(cam_hr.focal_length_mm > cam_lr.focal_length_mm || dx_hr <= dx_lr * (1.0 + 1e-12))) {
    throw InputError("make_pair: the HR camera needs the longer focal length or finer sampling");
  }
  const int w = opts.hr_window.width;
  const int h = opts.hr_window.height;
  if (w < 8 || h < 8) throw InputError("make_pair: HR window must be at least 8x8");

  CapturePair pair;
  pair.hr.camera = cam_hr;
  pair.hr.geometry = geom.hr;
  pair.hr.sampling_interval_mm = dx_hr;
  pair.lr.camera = cam_lr;
  pair.lr.geometry = geom.lr;
  pair.lr.sampling_interval_mm = dx_lr;

  pair.hr.image = capture(object, cam_hr, geom.hr, psf_hr,
                          {opts.hr_window, opts.noise_sigma, derive_seed(opts.seed, 0)});
  const int lw = 2 * lr_half_extent(w, dx_hr, dx_lr) + 2;
  const int lh = 2 * lr_half_extent(h, dx_hr, dx_lr) + 2;
  if (lw > cam_lr.sensor_width_px || lh > cam_lr.sensor_height_px) {
    throw InputError("make_pair: HR field of view is not inside the LR field of view");
  }
  pair.lr.image = capture(object, cam_lr, geom.lr, psf_lr,
                          {{lw, lh}, opts.noise_sigma, derive_seed(opts.seed, 1)});

  const double step = dx_hr / dx_lr;
  const kernels::Axis xs{lw / 2 - (w / 2) * step, step, w};
  const kernels::Axis ys{lh / 2 - (h / 2) * step, step, h};
  pair.matched_lr = resample_cubic(pair.lr.image, xs, ys);
  pair.matched_lr.provenance = pair.lr.image.provenance;

  pair.true_transfer_cutoff = pair_ground_truth(cam_hr, cam_lr, geom, psf_hr, psf_lr);
  pair.lr_crop_ratio = (cam_hr.sensor_width_px * dx_hr) / (cam_lr.sensor_width_px * dx_lr);
  return pair;
}

namespace {

SceneSpec zone_plate_for(const FieldLayout& layout, int size_px, double dx_hr) {
  SceneSpec spec;
  spec.pattern = ScenePattern::zone_plate;
  spec.size_px = layout.size_px;
  spec.physical_extent_mm = layout.size_px * layout.pitch_mm;
  // local frequency reaches 0.45 cycles per HR sample at the window corner
  const double r_corner = (size_px / 2) * std::sqrt(2.0) * dx_hr;
  spec.k_rad_per_mm2 = 0.45 * std::numbers::pi / (r_corner * dx_hr);
  return spec;
}

FieldLayout merge(const FieldLayout& a, const FieldLayout& b) {
  FieldLayout out;
  out.pitch_mm = std::min(a.pitch_mm, b.pitch_mm);
  const double half = std::max(a.size_px * a.pitch_mm, b.size_px * b.pitch_mm) / 2.0;
  out.size_px = 2 * static_cast<int>(std::ceil(half / out.pitch_mm));
  return out;
}

PairMeasurement measure(const CapturePair& pair, const EstimateOptions& est_opts) {
  const TransferEstimate est = estimate_pair_cutoff(pair.hr.image, pair.matched_lr, est_opts);
  PairMeasurement m;
  m.camera = pair.lr.camera;
  m.distance_mm = pair.lr.geometry.object_distance_mm;
  m.sampling_interval_mm = pair.lr.sampling_interval_mm;
  m.true_cutoff = pair.true_transfer_cutoff;
  m.estimated_cutoff = est.cutoff_cyc_per_sample;
  m.confidence = est.confidence;
  return m;
}

void common_checks(int size_px, double kappa, int order, int oversample, double noise) {
  if (size_px < 64) throw ConfigError("size_px must be at least 64");
  check_positive(kappa, "kappa");
  if (order < 1) throw ConfigError("order must be >= 1");
  if (oversample < 1) throw ConfigError("oversample must be >= 1");
  if (!(noise >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
}

}  // namespace

void AlphaBetaConfig::validate() const {
  cam_hr.validate();
  cam_lr_a.validate();
  cam_lr_b.validate();
  check_positive(distance_mm, "distance_mm");
  common_checks(size_px, kappa, order, oversample, noise_sigma);
}

AlphaBetaReport alpha_beta_experiment(const AlphaBetaConfig& cfg) {
  cfg.validate();
  const PairGeometry geom = PairGeometry::colocated(cfg.distance_mm);
  const CaptureWindow window{cfg.size_px, cfg.size_px};
  const FieldLayout layout =
      merge(field_layout(cfg.cam_hr, cfg.cam_lr_a, geom, window, cfg.oversample),
            field_layout(cfg.cam_hr, cfg.cam_lr_b, geom, window, cfg.oversample));
  const double dx_hr = interval_mm(cfg.cam_hr, geom.hr);
  const ObjectField scene = render_scene(zone_plate_for(layout, cfg.size_px, dx_hr));

  const PairOptions popts{window, cfg.noise_sigma, cfg.seed};
  const PsfModel hr_psf = PsfModel::delta();
  const CapturePair pa = make_pair(scene, cfg.cam_hr, cfg.cam_lr_a, geom, hr_psf,
                                   PsfModel::matched(cfg.cam_lr_a, cfg.distance_mm, cfg.kappa, cfg.order),
                                   popts);
  const CapturePair pb = make_pair(scene, cfg.cam_hr, cfg.cam_lr_b, geom, hr_psf,
                                   PsfModel::matched(cfg.cam_lr_b, cfg.distance_mm, cfg.kappa, cfg.order),
                                   {window, cfg.noise_sigma, derive_seed(cfg.seed, 2)});

  AlphaBetaReport r;
  r.a = measure(pa, cfg.estimate);
  r.b = measure(pb, cfg.estimate);
  if (r.a.confidence == 0.0 || r.b.confidence == 0.0) {
    throw ExperimentError("alpha/beta: no reliable cutoff on one of the pairs");
  }
  r.alpha = pixel_size_ratio(cfg.cam_lr_a, cfg.cam_lr_b);
  r.beta = r.b.estimated_cutoff / r.a.estimated_cutoff;
  r.relative_gap = std::abs(r.alpha - r.beta) / r.alpha;
  r.expected_ratio = interval_mm(cfg.cam_lr_a, geom.lr) / interval_mm(cfg.cam_lr_b, geom.lr);
  return r;
}

namespace {

nlohmann::json measurement_json(const PairMeasurement& m) {
  return {{"camera", m.camera.name},
          {"focal_length_mm", m.camera.focal_length_mm},
          {"pixel_pitch_um", m.camera.pixel_pitch_um},
          {"distance_mm", m.distance_mm},
          {"sampling_interval_mm", m.sampling_interval_mm},
          {"true_cutoff", m.true_cutoff},
          {"estimated_cutoff", m.estimated_cutoff},
          {"confidence", m.confidence}};
}

}  // namespace

nlohmann::json to_json(const AlphaBetaReport& r) {
  return {{"alpha", r.alpha},
          {"beta", r.beta},
          {"relative_gap", r.relative_gap},
          {"expected_ratio", r.expected_ratio},
          {"a", measurement_json(r.a)},
          {"b", measurement_json(r.b)}};
}

void to_json(nlohmann::json& j, const AlphaBetaConfig& c) {
  j = {{"cam_hr", c.cam_hr},       {"cam_lr_a", c.cam_lr_a}, {"cam_lr_b", c.cam_lr_b},
       {"distance_mm", c.distance_mm}, {"size_px", c.size_px}, {"kappa", c.kappa},
       {"order", c.order},         {"oversample", c.oversample},
       {"noise_sigma", c.noise_sigma}, {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, AlphaBetaConfig& c) {
  c = AlphaBetaConfig{};
  if (j.contains("cam_hr")) c.cam_hr = j.at("cam_hr").get<CameraSpec>();
  if (j.contains("cam_lr_a")) c.cam_lr_a = j.at("cam_lr_a").get<CameraSpec>();
  if (j.contains("cam_lr_b")) c.cam_lr_b = j.at("cam_lr_b").get<CameraSpec>();
  c.distance_mm = j.value("distance_mm", c.distance_mm);
  c.size_px = j.value("size_px", c.size_px);
  c.kappa = j.value("kappa", c.kappa);
  c.order = j.value("order", c.order);
  c.oversample = j.value("oversample", c.oversample);
  c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
  c.seed = j.value("seed", c.seed);
  c.validate();
}

void DistanceSweepConfig::validate() const {
  cam_hr.validate();
  cam_lr.validate();
  check_positive(hr_distance_mm, "hr_distance_mm");
  if (lr_distances_mm.empty()) throw ConfigError("lr_distances_mm is empty");
  for (double s : lr_distances_mm) check_positive(s, "LR distance");
  common_checks(size_px, kappa, order, oversample, noise_sigma);
}

void to_json(nlohmann::json& j, const DistanceSweepConfig& c) {
  j = {{"cam_hr", c.cam_hr},
       {"cam_lr", c.cam_lr},
       {"hr_distance_mm", c.hr_distance_mm},
       {"lr_distances_mm", c.lr_distances_mm},
       {"size_px", c.size_px},
       {"kappa", c.kappa},
       {"order", c.order},
       {"oversample", c.oversample},
       {"noise_sigma", c.noise_sigma},
       {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, DistanceSweepConfig& c) {
  c = DistanceSweepConfig{};
  if (j.contains("cam_hr")) c.cam_hr = j.at("cam_hr").get<CameraSpec>();
  if (j.contains("cam_lr")) c.cam_lr = j.at("cam_lr").get<CameraSpec>();
  c.hr_distance_mm = j.value("hr_distance_mm", c.hr_distance_mm);
  if (j.contains("lr_distances_mm")) c.lr_distances_mm = j.at("lr_distances_mm").get<std::vector<double>>();
  c.size_px = j.value("size_px", c.size_px);
  c.kappa = j.value("kappa", c.kappa);
  c.order = j.value("order", c.order);
  c.oversample = j.value("oversample", c.oversample);
  c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
  c.seed = j.value("seed", c.seed);
  c.validate();
}

std::vector<PairMeasurement> distance_sweep(const DistanceSweepConfig& cfg,
                                            std::vector<CapturePair>* pairs) {
  cfg.validate();
  const PsfModel lr_psf = PsfModel::matched(cfg.cam_lr, cfg.hr_distance_mm, cfg.kappa, cfg.order);
  const CaptureWindow window{cfg.size_px, cfg.size_px};
  const double dx_hr = interval_mm(cfg.cam_hr, {cfg.hr_distance_mm, 0.0});
  const int n = static_cast<int>(cfg.lr_distances_mm.size());
  std::vector<PairMeasurement> out(n);
  std::vector<std::string> errors(n);
  if (pairs) pairs->assign(n, CapturePair{});
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const PairGeometry geom{{cfg.hr_distance_mm, 0.0}, {cfg.lr_distances_mm[i], 0.0}};
      const FieldLayout layout = field_layout(cfg.cam_hr, cfg.cam_lr, geom, window, cfg.oversample);
      const ObjectField scene = render_scene(zone_plate_for(layout, cfg.size_px, dx_hr));
      const CapturePair pair = make_pair(scene, cfg.cam_hr, cfg.cam_lr, geom, PsfModel::delta(),
                                         lr_psf, {window, cfg.noise_sigma, derive_seed(cfg.seed, i)});
      out[i] = measure(pair, cfg.estimate);
      if (pairs) (*pairs)[i] = pair;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ExperimentError("distance sweep: " + e);
  return out;
}

void LearningSweepConfig::validate() const {
  camera.validate();
  if (size_px < 64) throw ConfigError("size_px must be at least 64");
  if (count < 2) throw ConfigError("count must be at least 2");
  if (!(cutoff_min > 0.0 && cutoff_min < cutoff_max && cutoff_max <= 0.5)) {
    throw ConfigError("cutoff range must satisfy 0 < min < max <= 0.5");
  }
  check_positive(corner_ratio, "corner_ratio");
  common_checks(size_px, 1.0, order, oversample, noise_sigma);
}

void to_json(nlohmann::json& j, const LearningSweepConfig& c) {
  j = {{"camera", c.camera},         {"size_px", c.size_px},
       {"count", c.count},           {"cutoff_min", c.cutoff_min},
       {"cutoff_max", c.cutoff_max}, {"corner_ratio", c.corner_ratio},
       {"order", c.order},           {"oversample", c.oversample},
       {"noise_sigma", c.noise_sigma}, {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, LearningSweepConfig& c) {
  c = LearningSweepConfig{};
  if (j.contains("camera")) c.camera = j.at("camera").get<CameraSpec>();
  c.size_px = j.value("size_px", c.size_px);
  c.count = j.value("count", c.count);
  c.cutoff_min = j.value("cutoff_min", c.cutoff_min);
  c.cutoff_max = j.value("cutoff_max", c.cutoff_max);
  c.corner_ratio = j.value("corner_ratio", c.corner_ratio);
  c.order = j.value("order", c.order);
  c.oversample = j.value("oversample", c.oversample);
  c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
  c.seed = j.value("seed", c.seed);
  c.validate();
}

std::vector<SweepPair> learning_sweep(const LearningSweepConfig& cfg) {
  cfg.validate();
  const double s_ref = 10000.0;
  const double label_ref = 0.25;
  const double dx_ref = interval_mm(cfg.camera, {s_ref, 0.0});
  const double fc_obj = label_ref / dx_ref;
  const PsfModel lr_psf = PsfModel::butterworth(fc_obj, cfg.order, s_ref, 0.0);
  const CaptureWindow window{cfg.size_px, cfg.size_px};

  const int n = cfg.count;
  std::vector<SweepPair> out(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const double label = cfg.cutoff_min + (cfg.cutoff_max - cfg.cutoff_min) * i / (n - 1);
      const double s = s_ref * label / label_ref;
      const PairGeometry geom = PairGeometry::colocated(s);
      const FieldLayout layout = field_layout(cfg.camera, cfg.camera, geom, window, cfg.oversample);
      SceneSpec spec;
      spec.pattern = ScenePattern::white_noise;
      spec.size_px = layout.size_px;
      spec.physical_extent_mm = layout.size_px * layout.pitch_mm;
      spec.seed = derive_seed(cfg.seed, 2 * i);
      spec.corner_cyc_per_mm = cfg.corner_ratio * fc_obj;
      const ObjectField scene = render_scene(spec);
      CapturePair pair = make_pair(scene, cfg.camera, cfg.camera, geom, PsfModel::delta(), lr_psf,
                                   {window, cfg.noise_sigma, derive_seed(cfg.seed, 2 * i + 1)});
      char id[32];
      std::snprintf(id, sizeof id, "sweep_%03d", i);
      out[i].pair = ImagePair{id, std::move(pair.hr.image), std::move(pair.matched_lr)};
      out[i].distance_mm = s;
      out[i].true_cutoff = pair.true_transfer_cutoff;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ExperimentError("learning sweep: " + e);
  return out;
}

}  // namespace fadm
