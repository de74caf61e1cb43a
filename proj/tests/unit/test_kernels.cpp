#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "fadm/kernels.hpp"
#include "oracles.hpp"

using namespace fadm;
using namespace fadm::kernels;

namespace {

class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = max_threads();
    set_threads(GetParam());
  }
  void TearDown() override { set_threads(saved_); }
  int saved_ = 1;
};

}  // namespace

TEST_P(ThreadCounts, PolarAverageMatchesSerial) {
  const RealGrid g = to_grid(oracle::random_image(100, 90, 3));
  for (bool expf : {false, true}) {
    const PolarLattice lat{45, 360, 0.5 / 45, expf};
    std::vector<double> a(45), b(45);
    polar_average(g, lat, a);
    serial::polar_average(g, lat, b);
    EXPECT_EQ(a, b);
  }
}

TEST_P(ThreadCounts, MultiplyGainMatchesSerial) {
  const Image re = oracle::random_image(77, 33, 1);
  const Image gain = oracle::random_image(77, 33, 2);
  std::vector<std::complex<double>> a(re.samples().size()), b;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = {re.samples()[i], 1.0 - re.samples()[i]};
  b = a;
  multiply_gain(a, gain.samples());
  serial::multiply_gain(b, gain.samples());
  EXPECT_EQ(a, b);
}

TEST_P(ThreadCounts, BilinearSampleMatchesSerial) {
  const RealGrid g = to_grid(oracle::random_image(64, 50, 4));
  const Axis xs{0.3, 0.77, 80};
  const Axis ys{1.1, 0.61, 70};
  std::vector<double> a(80 * 70), b(80 * 70);
  bilinear_sample(g, xs, ys, a);
  serial::bilinear_sample(g, xs, ys, b);
  EXPECT_EQ(a, b);
}

TEST_P(ThreadCounts, CubicSampleMatchesSerial) {
  const Image img = oracle::random_image(40, 30, 5);
  const Axis xs{-1.5, 0.37, 120};
  const Axis ys{-0.5, 0.29, 110};
  std::vector<double> a(120 * 110), b(120 * 110);
  cubic_sample(img.samples(), 40, 30, xs, ys, a);
  serial::cubic_sample(img.samples(), 40, 30, xs, ys, b);
  EXPECT_EQ(a, b);
}

TEST_P(ThreadCounts, SsimMatchesSerial) {
  const Image x = oracle::random_image(70, 45, 6);
  const Image y = oracle::random_image(70, 45, 7);
  EXPECT_EQ(ssim_mean(x.samples(), y.samples(), 70, 45),
            serial::ssim_mean(x.samples(), y.samples(), 70, 45));
}

INSTANTIATE_TEST_SUITE_P(Threads, ThreadCounts, ::testing::Values(1, 2, 3, 8));

TEST(Bilinear, ExactOnNodesAndLinearFunctions) {
  RealGrid g(10, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 10; ++x) g.at(x, y) = 0.5 * x - 0.25 * y + 1.0;
  std::vector<double> out(7 * 5);
  serial::bilinear_sample(g, {0.0, 1.37, 7}, {0.2, 1.5, 5}, out);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 7; ++i)
      EXPECT_NEAR(out[j * 7 + i], 0.5 * (1.37 * i) - 0.25 * (0.2 + 1.5 * j) + 1.0, 1e-12);
}

TEST(CatmullRom, KernelProperties) {
  EXPECT_EQ(catmull_rom(0.0), 1.0);
  EXPECT_EQ(catmull_rom(1.0), 0.0);
  EXPECT_EQ(catmull_rom(-1.0), 0.0);
  EXPECT_EQ(catmull_rom(2.0), 0.0);
  EXPECT_EQ(catmull_rom(2.5), 0.0);
  for (double t : {0.1, 0.35, 0.5, 0.9}) {
    const double sum = catmull_rom(t + 1) + catmull_rom(t) + catmull_rom(t - 1) + catmull_rom(t - 2);
    EXPECT_NEAR(sum, 1.0, 1e-15);
    EXPECT_EQ(catmull_rom(t), catmull_rom(-t));
  }
}

TEST(CubicSample, InterpolatesNodesAndReproducesQuadratics) {
  const Image img = oracle::random_image(12, 9, 8);
  std::vector<double> out(12 * 9);
  cubic_sample(img.samples(), 12, 9, {0.0, 1.0, 12}, {0.0, 1.0, 9}, out);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], img.samples()[i], 1e-15);

  // Catmull-Rom reproduces polynomials up to degree 2 away from the border
  std::vector<double> q(20 * 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) q[y * 20 + x] = 0.01 * x * x + 0.02 * y;
  std::vector<double> s(1);
  cubic_sample(q, 20, 20, {7.3, 1.0, 1}, {9.6, 1.0, 1}, s);
  EXPECT_NEAR(s[0], 0.01 * 7.3 * 7.3 + 0.02 * 9.6, 1e-12);
}
