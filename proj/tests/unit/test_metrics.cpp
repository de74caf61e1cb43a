#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fadm/degradation.hpp"
#include "fadm/error.hpp"
#include "fadm/metrics.hpp"
#include "oracles.hpp"

using namespace fadm;

namespace {

// Direct per-window SSIM, no separability or running sums.
double naive_ssim(const Image& a, const Image& b) {
  double w[11][11];
  double total = 0.0;
  for (int j = 0; j < 11; ++j)
    for (int i = 0; i < 11; ++i) {
      w[j][i] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * 1.5 * 1.5));
      total += w[j][i];
    }
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double sum = 0.0;
  int count = 0;
  for (int y = 0; y + 11 <= a.height(); ++y) {
    for (int x = 0; x + 11 <= a.width(); ++x) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int j = 0; j < 11; ++j)
        for (int i = 0; i < 11; ++i) {
          const double wt = w[j][i] / total;
          const double va = a.at(x + i, y + j), vb = b.at(x + i, y + j);
          ma += wt * va;
          mb += wt * vb;
          saa += wt * va * va;
          sbb += wt * vb * vb;
          sab += wt * va * vb;
        }
      const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
      sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  }
  return sum / count;
}

}  // namespace

TEST(Psnr, Fixtures) {
  Image a(2, 2), b(2, 2);
  b.at(0, 0) = 1.0;
  EXPECT_NEAR(psnr(a, b), 10.0 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(psnr(a, b), 6.0206, 1e-4);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
  EXPECT_GT(psnr(a, a), 0.0);

  const Image c = oracle::random_image(16, 16, 1, 1, 0.0, 0.8);
  Image d = c;
  for (double& v : d.samples()) v += 0.1;
  EXPECT_NEAR(psnr(c, d), 20.0, 1e-9);
}

TEST(Psnr, SymmetricAndErrors) {
  const Image a = oracle::random_image(20, 20, 2, 3);
  const Image b = oracle::random_image(20, 20, 3, 3);
  EXPECT_EQ(psnr(a, b), psnr(b, a));
  EXPECT_THROW(psnr(a, Image(20, 20)), InputError);
  EXPECT_THROW(psnr(a, Image(21, 20, 3)), InputError);
}

TEST(Psnr, DecreasesWithNoiseLevel) {
  const Image img = oracle::texture(64, 64, 4);
  double prev = std::numeric_limits<double>::infinity();
  for (double sigma : {0.005, 0.01, 0.02, 0.05}) {
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) mean += psnr(img, add_read_noise(img, sigma, seed));
    mean /= 10;
    EXPECT_LT(mean, prev);
    prev = mean;
  }
}

TEST(Ssim, MatchesDirectWindowOracle) {
  const Image a = oracle::texture(40, 33, 5);
  const Image b = add_read_noise(a, 0.05, 1);
  EXPECT_NEAR(ssim(a, b), naive_ssim(a, b), 1e-12);
  const Image r1 = oracle::random_image(25, 30, 6);
  const Image r2 = oracle::random_image(25, 30, 7);
  EXPECT_NEAR(ssim(r1, r2), naive_ssim(r1, r2), 1e-12);
}

TEST(Ssim, IdentityAndSymmetry) {
  const Image a = oracle::texture(48, 48, 8);
  const Image b = oracle::random_image(48, 48, 9);
  EXPECT_EQ(ssim(a, a), 1.0);
  EXPECT_EQ(ssim(a, b), ssim(b, a));
  const Image rgb1 = oracle::random_image(32, 32, 10, 3);
  const Image rgb2 = oracle::random_image(32, 32, 11, 3);
  EXPECT_EQ(ssim(rgb1, rgb2, ColorMode::per_channel), ssim(rgb2, rgb1, ColorMode::per_channel));
  EXPECT_NEAR(ssim(rgb1, rgb1, ColorMode::per_channel), 1.0, 1e-12);
}

TEST(Ssim, ConstantImagesClosedForm) {
  const Image a(32, 32, 1, 0.1), b(32, 32, 1, 0.6);
  const double c1 = 1e-4;
  const double expected = (2 * 0.1 * 0.6 + c1) / (0.01 + 0.36 + c1);
  EXPECT_NEAR(ssim(a, b), expected, 1e-12);
  EXPECT_LT(ssim(a, b), 0.5);
}

TEST(Ssim, NegativeImageFixture) {
  const Image a = oracle::texture(64, 64, 12);
  Image neg = a;
  for (double& v : neg.samples()) v = 1.0 - v;
  const double s = ssim(a, neg);
  EXPECT_LT(s, 0.0);
  EXPECT_NEAR(s, -0.594332296463739, 1e-12);  // frozen
  EXPECT_NEAR(s, naive_ssim(a, neg), 1e-12);
}

TEST(Ssim, RangeOverRandomInputs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Image a = oracle::random_image(16, 16, seed);
    const Image b = oracle::random_image(16, 16, seed + 100);
    const double s = ssim(a, b);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Ssim, LuminanceModeAndErrors) {
  const Image rgb = oracle::random_image(24, 24, 13, 3);
  const Image rgb2 = oracle::random_image(24, 24, 14, 3);
  EXPECT_EQ(ssim(rgb, rgb2), ssim(luminance(rgb), luminance(rgb2)));
  EXPECT_THROW(ssim(Image(10, 40), Image(10, 40)), InputError);
  EXPECT_THROW(ssim(Image(20, 20), Image(20, 21)), InputError);
}

TEST(Quality, ReportWithPerChannelBreakdown) {
  const Image a = oracle::random_image(24, 24, 15, 3);
  const Image b = oracle::random_image(24, 24, 16, 3);
  const QualityReport r = evaluate_quality(a, b);
  EXPECT_EQ(r.per_channel.size(), 3u);
  EXPECT_EQ(r.psnr_db, psnr(a, b));
  EXPECT_EQ(r.ssim, ssim(a, b));
  EXPECT_TRUE(evaluate_quality(Image(16, 16), Image(16, 16)).per_channel.empty());
}
