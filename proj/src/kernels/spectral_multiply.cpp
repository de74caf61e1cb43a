#include "fadm/kernels.hpp"

namespace fadm::kernels {

void multiply_gain(std::span<std::complex<double>> bins, std::span<const double> gain) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(bins.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) bins[i] *= gain[i];
}

namespace serial {
void multiply_gain(std::span<std::complex<double>> bins, std::span<const double> gain) {
  for (std::size_t i = 0; i < bins.size(); ++i) bins[i] *= gain[i];
}
}  // namespace serial

}  // namespace fadm::kernels
