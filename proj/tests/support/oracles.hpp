#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "fadm/image.hpp"

namespace oracle {

/// O(n^4) unitary DFT with the DC bin at (w/2, h/2).
std::vector<std::complex<double>> centered_dft(const std::vector<double>& x, int w, int h);

/// 1 / sqrt(1 + (r / fc)^(2n)).
double butterworth(double r, double fc, int order);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

double rmse(const std::vector<double>& a, const std::vector<double>& b);

/// Uniform random image in [lo, hi].
fadm::Image random_image(int w, int h, std::uint64_t seed, int channels = 1, double lo = 0.0,
                         double hi = 1.0);

/// Smooth, band-limited texture (sum of random cosines) in [0, 1].
fadm::Image texture(int w, int h, std::uint64_t seed, int components = 40, double max_freq = 0.45);

/// Directory with the bundled natural test images.
std::string data_dir();

}  // namespace oracle
