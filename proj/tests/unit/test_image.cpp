#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fadm/error.hpp"
#include "fadm/image.hpp"
#include "fadm/image_io.hpp"
#include "oracles.hpp"

using namespace fadm;
namespace fs = std::filesystem;

namespace {
fs::path tmp_dir() {
  const auto d = fs::temp_directory_path() / "fadm_image_test";
  fs::create_directories(d);
  return d;
}
}  // namespace

TEST(Image, ConstructionAndLayout) {
  Image img(4, 3, 3, 0.25);
  EXPECT_EQ(img.plane_size(), 12u);
  EXPECT_EQ(img.samples().size(), 36u);
  img.at(1, 2, 2) = 0.75;
  EXPECT_EQ(img.channel(2)[2 * 4 + 1], 0.75);
  EXPECT_THROW(Image(0, 3), InputError);
  EXPECT_THROW(Image(3, 3, 2), InputError);
}

TEST(Image, ValidateRangeAndFiniteness) {
  Image img(4, 4, 1, 0.5);
  EXPECT_NO_THROW(img.validate());
  img.at(0, 0) = 1.5;
  EXPECT_THROW(img.validate(), InputError);
  EXPECT_NO_THROW(img.require_finite());
  img.at(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(img.require_finite(), InputError);
  img.at(1, 0) = -0.5;
  img.clamp01();
  EXPECT_EQ(img.at(0, 0), 1.0);
  EXPECT_EQ(img.at(1, 0), 0.0);
}

TEST(Image, LuminanceUsesBt601Weights) {
  Image rgb(2, 1, 3);
  rgb.at(0, 0, 0) = 1.0;
  rgb.at(1, 0, 1) = 1.0;
  const Image y = luminance(rgb);
  EXPECT_EQ(y.channels(), 1);
  EXPECT_NEAR(y.at(0, 0), 0.299, 1e-15);
  EXPECT_NEAR(y.at(1, 0), 0.587, 1e-15);
  const Image gray(3, 3, 1, 0.3);
  EXPECT_EQ(luminance(gray), gray);
}

TEST(Image, CropBounds) {
  const Image img = oracle::random_image(10, 8, 1);
  const Image c = crop(img, 2, 3, 4, 5);
  EXPECT_EQ(c.width(), 4);
  EXPECT_EQ(c.height(), 5);
  EXPECT_EQ(c.at(0, 0), img.at(2, 3));
  EXPECT_EQ(c.at(3, 4), img.at(5, 7));
  EXPECT_THROW(crop(img, 7, 0, 4, 4), InputError);
  EXPECT_THROW(crop(img, -1, 0, 4, 4), InputError);
}

TEST(ImageIo, PngRoundTripIsExactOnEightBitValues) {
  Image img(7, 5, 3);
  int k = 0;
  for (double& v : img.samples()) v = (k++ % 256) / 255.0;
  write_image(img, tmp_dir() / "rt.png");
  const Image back = read_image(tmp_dir() / "rt.png");
  ASSERT_EQ(back.channels(), 3);
  EXPECT_EQ(back.source_bit_depth(), 8);
  for (std::size_t i = 0; i < img.samples().size(); ++i) {
    EXPECT_NEAR(back.samples()[i], img.samples()[i], 1e-12);
  }
}

TEST(ImageIo, PnmRoundTrip) {
  const Image img = oracle::random_image(9, 4, 3);
  write_image(img, tmp_dir() / "rt.pgm");
  const Image back = read_image(tmp_dir() / "rt.pgm");
  for (std::size_t i = 0; i < img.samples().size(); ++i) {
    EXPECT_EQ(back.samples()[i], quantize8(img.samples()[i]) / 255.0);
  }
  const Image rgb = oracle::random_image(3, 3, 4, 3);
  write_image(rgb, tmp_dir() / "rt.ppm");
  EXPECT_EQ(read_image(tmp_dir() / "rt.ppm").channels(), 3);
}

TEST(ImageIo, SixteenBitPgmWithComment) {
  const auto path = tmp_dir() / "deep.pgm";
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# comment\n2 1\n65535\n";
    const unsigned char data[] = {0xFF, 0xFF, 0x80, 0x00};
    out.write(reinterpret_cast<const char*>(data), 4);
  }
  const Image img = read_image(path);
  EXPECT_EQ(img.source_bit_depth(), 16);
  EXPECT_EQ(img.at(0, 0), 1.0);
  EXPECT_NEAR(img.at(1, 0), 32768.0 / 65535.0, 1e-15);
}

TEST(ImageIo, ErrorsAreIoErrors) {
  EXPECT_THROW(read_image(tmp_dir() / "does_not_exist.png"), IoError);
  const auto bad = tmp_dir() / "bad.png";
  {
    std::ofstream out(bad);
    out << "not a png";
  }
  EXPECT_THROW(read_image(bad), IoError);
  EXPECT_THROW(write_image(Image(2, 2), tmp_dir() / "x.tiff"), IoError);
}

TEST(ImageIo, BundledNaturalImagesLoad) {
  for (const char* name : {"camera.png", "coffee.png", "chelsea.png", "brick.png"}) {
    const Image img = read_image(fs::path(oracle::data_dir()) / name);
    EXPECT_GE(img.width(), 256) << name;
    EXPECT_NO_THROW(img.validate());
  }
}
