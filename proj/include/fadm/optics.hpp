#pragma once

// Thin-lens geometry and sensor sampling.
//
// Units: lengths in millimetres, pixel pitch in micrometres, optical
// frequencies in cycles/mm. Digital frequencies elsewhere in the library are
// in cycles/sample (0 .. 0.5).

#include <filesystem>
#include <string>

#include <json.hpp>

namespace fadm {

struct CameraSpec {
  std::string name;
  double focal_length_mm = 0.0;
  double pixel_pitch_um = 0.0;
  int sensor_width_px = 0;
  int sensor_height_px = 0;

  double pixel_pitch_mm() const { return pixel_pitch_um * 1e-3; }
  /// Throws DomainError unless every field is positive.
  void validate() const;
};

struct SceneGeometry {
  double object_distance_mm = 0.0;
  double object_height_mm = 0.0;  // 0 when unknown

  void validate() const;
  /// Far-field regime in which s' ~ f holds well (s >= 50 f).
  bool far_field(const CameraSpec& camera) const {
    return object_distance_mm >= 50.0 * camera.focal_length_mm;
  }
};

struct ThinLensSolution {
  double image_distance_mm = 0.0;  // exact s'
  double magnification = 0.0;      // exact s'/s
  double image_height_mm = 0.0;    // M * h
  double approx_magnification = 0.0;  // f/s
  double approx_relative_error = 0.0; // |M - f/s| / M
};

struct SamplingModel {
  double sensor_nyquist_cyc_per_mm = 0.0;        // 1 / (2 pitch)
  double object_sampling_interval_mm = 0.0;      // (s/f) pitch
  double object_sampling_freq_cyc_per_mm = 0.0;  // (f/s) sensor Nyquist
};

ThinLensSolution solve_thin_lens(const CameraSpec& spec, const SceneGeometry& geom);

SamplingModel sampling_model(const CameraSpec& spec, const SceneGeometry& geom);

/// Object sampling frequency ratio target/source at a shared object
/// distance, i.e. pitch_source / pitch_target.
double pixel_size_ratio(const CameraSpec& source, const CameraSpec& target);

void to_json(nlohmann::json& j, const CameraSpec& spec);
void from_json(const nlohmann::json& j, CameraSpec& spec);

CameraSpec load_camera_spec(const std::filesystem::path& path);
void save_camera_spec(const CameraSpec& spec, const std::filesystem::path& path);

namespace cameras {
/// Published specifications of the two RealSR capture bodies.
CameraSpec canon_5d3(double focal_length_mm);
CameraSpec nikon_d810(double focal_length_mm);
}  // namespace cameras

}  // namespace fadm
