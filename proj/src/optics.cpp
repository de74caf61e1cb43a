#include "fadm/optics.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fadm/error.hpp"

namespace fadm {

void CameraSpec::validate() const {
  if (!(focal_length_mm > 0.0) || !std::isfinite(focal_length_mm)) {
    throw DomainError("camera '" + name + "': focal_length_mm must be positive");
  }
  if (!(pixel_pitch_um > 0.0) || !std::isfinite(pixel_pitch_um)) {
    throw DomainError("camera '" + name + "': pixel_pitch_um must be positive");
  }
  if (sensor_width_px <= 0 || sensor_height_px <= 0) {
    throw DomainError("camera '" + name + "': sensor dimensions must be positive");
  }
}

void SceneGeometry::validate() const {
  if (!(object_distance_mm > 0.0) || !std::isfinite(object_distance_mm)) {
    throw DomainError("object_distance_mm must be positive");
  }
  if (object_height_mm < 0.0 || !std::isfinite(object_height_mm)) {
    throw DomainError("object_height_mm must be non-negative");
  }
}

ThinLensSolution solve_thin_lens(const CameraSpec& spec, const SceneGeometry& geom) {
  spec.validate();
  geom.validate();
  const double f = spec.focal_length_mm;
  const double s = geom.object_distance_mm;
  if (s <= f) {
    throw DomainError("object distance must exceed the focal length for a real image");
  }
  ThinLensSolution out;
  // 1/s' = 1/f - 1/s  =>  s' = f s / (s - f)
  out.image_distance_mm = f * s / (s - f);
  out.magnification = out.image_distance_mm / s;
  out.image_height_mm = out.magnification * geom.object_height_mm;
  out.approx_magnification = f / s;
  out.approx_relative_error =
      std::abs(out.magnification - out.approx_magnification) / out.magnification;
  return out;
}

SamplingModel sampling_model(const CameraSpec& spec, const SceneGeometry& geom) {
  spec.validate();
  geom.validate();
  const double pitch = spec.pixel_pitch_mm();
  const double f = spec.focal_length_mm;
  const double s = geom.object_distance_mm;
  SamplingModel m;
  m.sensor_nyquist_cyc_per_mm = 1.0 / (2.0 * pitch);
  m.object_sampling_interval_mm = (s / f) * pitch;
  m.object_sampling_freq_cyc_per_mm = (f / s) * m.sensor_nyquist_cyc_per_mm;
  return m;
}

double pixel_size_ratio(const CameraSpec& source, const CameraSpec& target) {
  source.validate();
  target.validate();
  return source.pixel_pitch_um / target.pixel_pitch_um;
}

void to_json(nlohmann::json& j, const CameraSpec& spec) {
  j = nlohmann::json{{"name", spec.name},
                     {"focal_length_mm", spec.focal_length_mm},
                     {"pixel_pitch_um", spec.pixel_pitch_um},
                     {"sensor_width_px", spec.sensor_width_px},
                     {"sensor_height_px", spec.sensor_height_px}};
}

void from_json(const nlohmann::json& j, CameraSpec& spec) {
  try {
    spec.name = j.at("name").get<std::string>();
    spec.focal_length_mm = j.at("focal_length_mm").get<double>();
    spec.pixel_pitch_um = j.at("pixel_pitch_um").get<double>();
    spec.sensor_width_px = j.at("sensor_width_px").get<int>();
    spec.sensor_height_px = j.at("sensor_height_px").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("camera spec: ") + e.what());
  }
}

CameraSpec load_camera_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open camera spec " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  CameraSpec spec = j.get<CameraSpec>();
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return spec;
}

void save_camera_spec(const CameraSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << nlohmann::json(spec).dump(2) << '\n';
}

namespace cameras {

CameraSpec canon_5d3(double focal_length_mm) {
  return {"Canon EOS 5D Mark III", focal_length_mm, 6.25, 5760, 3840};
}

CameraSpec nikon_d810(double focal_length_mm) {
  return {"Nikon D810", focal_length_mm, 4.88, 7360, 4912};
}

}  // namespace cameras
}  // namespace fadm
