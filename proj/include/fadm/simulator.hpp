#pragma once

// Thin-lens capture simulator: synthetic object fields, distance-dependent
// PSFs, sensor sampling and HR/LR pair assembly with analytic ground truth.
//
// Object-plane coordinates are in millimetres with the optical axis at the
// field centre (index size/2). Camera pixel m of a W-wide capture window
// sits at (m - W/2) * dx, dx = (s/f) * pitch.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fadm/image.hpp"
#include "fadm/optics.hpp"
#include "fadm/predictor.hpp"
#include "fadm/transfer.hpp"

namespace fadm {

enum class ScenePattern { siemens_star, zone_plate, checkerboard, white_noise };

struct SceneSpec {
  ScenePattern pattern = ScenePattern::zone_plate;
  int size_px = 512;
  double physical_extent_mm = 100.0;
  int spokes = 36;              // siemens_star
  double k_rad_per_mm2 = 1.0;   // zone_plate: 0.5 + 0.5 cos(k r^2)
  int cell_px = 8;              // checkerboard
  std::uint64_t seed = 0;       // white_noise
  double corner_cyc_per_mm = 0.0;  // white_noise spectral corner, 0 = white

  double pitch_mm() const { return physical_extent_mm / size_px; }
  void validate() const;
};

struct ObjectField {
  RealGrid values;  // [0, 1]
  double pitch_mm = 0.0;

  int size() const { return values.width; }
  double extent_mm() const { return values.width * pitch_mm; }
};

ObjectField render_scene(const SceneSpec& spec);

struct PsfModel {
  enum class Kind { gaussian, butterworth };
  Kind kind = Kind::gaussian;
  double sigma_mm_at_reference = 0.0;            // gaussian; 0 = ideal optics
  double cutoff_cyc_per_mm_at_reference = 0.0;   // butterworth
  int order = 2;
  double reference_distance_mm = 1.0;
  /// Object-plane footprint scales as (s / s_ref)^axial_exponent. 1 keeps
  /// the PSF fixed on the sensor; 0 fixes it in the object plane.
  double axial_exponent = 1.0;

  static PsfModel delta();
  static PsfModel gaussian(double sigma_mm, double reference_distance_mm, double axial_exponent = 1.0);
  static PsfModel butterworth(double cutoff_cyc_per_mm, int order, double reference_distance_mm,
                              double axial_exponent = 1.0);
  /// Butterworth PSF whose cutoff is kappa times the camera's object
  /// sampling frequency at the reference distance.
  static PsfModel matched(const CameraSpec& camera, double reference_distance_mm, double kappa,
                          int order = 2);

  void validate() const;
  bool is_identity() const { return kind == Kind::gaussian && sigma_mm_at_reference == 0.0; }
  /// Object-plane transfer at radial frequency rho (cycles/mm), distance s.
  double transfer(double rho_cyc_per_mm, double distance_mm) const;
  /// -3 dB frequency in the object plane (infinity for ideal optics).
  double cutoff_cyc_per_mm(double distance_mm) const;
};

void to_json(nlohmann::json& j, const PsfModel& psf);
void from_json(const nlohmann::json& j, PsfModel& psf);

/// Central region of the sensor that is actually rendered.
struct CaptureWindow {
  int width = 0;
  int height = 0;
};

struct CaptureOptions {
  CaptureWindow window;  // 0 x 0: full sensor
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// PSF convolution (frequency domain, object plane) -> bilinear sampling at
/// the object sampling interval -> read noise -> clamp.
/// Throws InputError when the field of view leaves the object field.
Image capture(const ObjectField& object, const CameraSpec& camera, const SceneGeometry& geom,
              const PsfModel& psf, const CaptureOptions& opts);

/// HR and LR viewpoints. Co-located by default; the LR distance may differ
/// to model the LR camera moving while the HR reference stays put.
struct PairGeometry {
  SceneGeometry hr;
  SceneGeometry lr;

  static PairGeometry colocated(double distance_mm) {
    return {{distance_mm, 0.0}, {distance_mm, 0.0}};
  }
};

struct CaptureView {
  Image image;
  CameraSpec camera;
  SceneGeometry geometry;
  double sampling_interval_mm = 0.0;
};

struct CapturePair {
  CaptureView hr;
  CaptureView lr;
  Image matched_lr;  // LR resampled onto the HR lattice
  /// min(relative optics cutoff, LR Nyquist) in HR cycles/sample, <= 0.5.
  double true_transfer_cutoff = 0.0;
  double lr_crop_ratio = 0.0;  // HR FOV / LR FOV, linear
};

struct PairOptions {
  CaptureWindow hr_window{512, 512};
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Object field pitch and size that keep every capture at least
/// `oversample` times finer than the finest sampling interval and cover
/// the HR FOV plus the LR resampling margin.
struct FieldLayout {
  double pitch_mm = 0.0;
  int size_px = 0;
};
FieldLayout field_layout(const CameraSpec& cam_hr, const CameraSpec& cam_lr,
                         const PairGeometry& geom, const CaptureWindow& hr_window,
                         int oversample = 4);

/// Ground-truth composite cutoff (HR cycles/sample) for a pair, without
/// rendering anything.
double pair_ground_truth(const CameraSpec& cam_hr, const CameraSpec& cam_lr,
                         const PairGeometry& geom, const PsfModel& psf_hr,
                         const PsfModel& psf_lr);

CapturePair make_pair(const ObjectField& object, const CameraSpec& cam_hr,
                      const CameraSpec& cam_lr, const PairGeometry& geom, const PsfModel& psf_hr,
                      const PsfModel& psf_lr, const PairOptions& opts = {});

struct PairMeasurement {
  CameraSpec camera;
  double distance_mm = 0.0;
  double sampling_interval_mm = 0.0;
  double true_cutoff = 0.0;
  double estimated_cutoff = 0.0;
  double confidence = 0.0;
};

struct AlphaBetaConfig {
  CameraSpec cam_hr = cameras::nikon_d810(105.0);
  CameraSpec cam_lr_a = cameras::canon_5d3(55.0);
  CameraSpec cam_lr_b = cameras::nikon_d810(55.0);
  double distance_mm = 10000.0;
  int size_px = 512;
  double kappa = 0.4;  // LR PSF cutoff / LR object sampling frequency
  int order = 2;
  int oversample = 4;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  EstimateOptions estimate;

  void validate() const;
};

void to_json(nlohmann::json& j, const AlphaBetaConfig& cfg);
void from_json(const nlohmann::json& j, AlphaBetaConfig& cfg);

struct AlphaBetaReport {
  double alpha = 0.0;  // pixel_size_ratio(cam_lr_a, cam_lr_b)
  double beta = 0.0;   // estimated cutoff b / estimated cutoff a
  double relative_gap = 0.0;
  double expected_ratio = 0.0;  // object sampling ratio b / a at the LR focal lengths
  PairMeasurement a;
  PairMeasurement b;
};

/// Zone-plate scene captured by the HR camera and both LR cameras.
/// Throws ExperimentError if either estimate has zero confidence.
AlphaBetaReport alpha_beta_experiment(const AlphaBetaConfig& cfg);

nlohmann::json to_json(const AlphaBetaReport& report);

struct DistanceSweepConfig {
  CameraSpec cam_hr = cameras::canon_5d3(105.0);
  CameraSpec cam_lr = cameras::canon_5d3(55.0);
  double hr_distance_mm = 10000.0;
  std::vector<double> lr_distances_mm{5000.0, 10000.0, 20000.0};
  int size_px = 512;
  double kappa = 0.4;  // relative to the LR sampling frequency at hr_distance_mm
  int order = 2;
  int oversample = 4;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  EstimateOptions estimate;

  void validate() const;
};

void to_json(nlohmann::json& j, const DistanceSweepConfig& cfg);
void from_json(const nlohmann::json& j, DistanceSweepConfig& cfg);

/// HR reference fixed, LR camera moved through lr_distances_mm; one
/// measurement per distance in input order. The rendered pairs are kept in
/// `pairs` when given.
std::vector<PairMeasurement> distance_sweep(const DistanceSweepConfig& cfg,
                                            std::vector<CapturePair>* pairs = nullptr);

struct LearningSweepConfig {
  CameraSpec camera = cameras::canon_5d3(55.0);
  int size_px = 640;
  int count = 60;
  double cutoff_min = 0.08;  // ground-truth range, cycles/sample
  double cutoff_max = 0.45;
  /// Scene spectral corner relative to the optics cutoff.
  double corner_ratio = 0.5;
  int order = 2;
  int oversample = 2;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const LearningSweepConfig& cfg);
void from_json(const nlohmann::json& j, LearningSweepConfig& cfg);

struct SweepPair {
  ImagePair pair;
  double distance_mm = 0.0;
  double true_cutoff = 0.0;
};

/// Co-located same-camera pairs of textured scenes whose optics are fixed in
/// the object plane, with distances chosen so the ground-truth cutoff spans
/// [cutoff_min, cutoff_max] evenly.
std::vector<SweepPair> learning_sweep(const LearningSweepConfig& cfg);

}  // namespace fadm
