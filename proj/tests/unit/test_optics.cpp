#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "fadm/error.hpp"
#include "fadm/optics.hpp"

using namespace fadm;

TEST(ThinLens, ExactSolutionAndFarFieldApproximation) {
  const CameraSpec cam = cameras::canon_5d3(50.0);
  const SceneGeometry geom{10000.0, 1000.0};
  const auto sol = solve_thin_lens(cam, geom);
  const double s_img = 50.0 * 10000.0 / (10000.0 - 50.0);
  EXPECT_NEAR(sol.image_distance_mm, s_img, 1e-12);
  EXPECT_NEAR(sol.magnification, s_img / 10000.0, 1e-15);
  EXPECT_NEAR(sol.image_height_mm, 1000.0 * s_img / 10000.0, 1e-12);
  EXPECT_DOUBLE_EQ(sol.approx_magnification, 50.0 / 10000.0);
  // f/s underestimates M by f/s in relative terms
  EXPECT_NEAR(sol.approx_relative_error, 50.0 / 10000.0, 1e-12);
  EXPECT_TRUE(geom.far_field(cam));
}

TEST(ThinLens, ObjectInsideFocalLengthIsRejected) {
  const CameraSpec cam = cameras::canon_5d3(50.0);
  EXPECT_THROW(solve_thin_lens(cam, {50.0, 0.0}), DomainError);
  EXPECT_THROW(solve_thin_lens(cam, {20.0, 0.0}), DomainError);
  EXPECT_FALSE(SceneGeometry({100.0, 0.0}).far_field(cam));
}

TEST(Sampling, NyquistAndObjectInterval) {
  const CameraSpec cam = cameras::nikon_d810(105.0);
  const auto m = sampling_model(cam, {10000.0, 0.0});
  EXPECT_NEAR(m.sensor_nyquist_cyc_per_mm, 1.0 / (2.0 * 4.88e-3), 1e-9);
  EXPECT_NEAR(m.object_sampling_interval_mm, 10000.0 / 105.0 * 4.88e-3, 1e-12);
  EXPECT_NEAR(m.object_sampling_freq_cyc_per_mm, 0.5 / m.object_sampling_interval_mm, 1e-12);
}

TEST(Sampling, ObjectFrequencyInverselyProportionalToDistance) {
  const CameraSpec cam = cameras::canon_5d3(55.0);
  const double a = sampling_model(cam, {5000.0, 0.0}).object_sampling_freq_cyc_per_mm;
  const double b = sampling_model(cam, {10000.0, 0.0}).object_sampling_freq_cyc_per_mm;
  EXPECT_NEAR(b / a, 0.5, 1e-14);
}

TEST(PixelSizeRatio, CanonToNikon) {
  const double alpha = pixel_size_ratio(cameras::canon_5d3(55.0), cameras::nikon_d810(55.0));
  EXPECT_NEAR(alpha, 6.25 / 4.88, 1e-15);
  EXPECT_NEAR(alpha, 1.2807, 1e-4);
  EXPECT_DOUBLE_EQ(pixel_size_ratio(cameras::canon_5d3(55.0), cameras::canon_5d3(105.0)), 1.0);
}

TEST(CameraSpec, ValidationRejectsNonPositiveFields) {
  CameraSpec c = cameras::canon_5d3(50.0);
  c.pixel_pitch_um = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = cameras::canon_5d3(-1.0);
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_THROW(SceneGeometry({-5.0, 0.0}).validate(), DomainError);
}

TEST(CameraSpec, JsonRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "fadm_optics_test";
  std::filesystem::create_directories(dir);
  const CameraSpec c = cameras::nikon_d810(105.0);
  save_camera_spec(c, dir / "cam.json");
  const CameraSpec back = load_camera_spec(dir / "cam.json");
  EXPECT_EQ(back.name, c.name);
  EXPECT_EQ(back.focal_length_mm, c.focal_length_mm);
  EXPECT_EQ(back.pixel_pitch_um, c.pixel_pitch_um);
  EXPECT_EQ(back.sensor_width_px, c.sensor_width_px);
  EXPECT_EQ(back.sensor_height_px, c.sensor_height_px);
  EXPECT_THROW(load_camera_spec(dir / "missing.json"), IoError);
}
