#include "sobnet/kernels.hpp"

#include <omp.h>

namespace sobnet {

namespace {

double pairwise(const double* v, std::size_t n) noexcept {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  return pairwise(values.data(), values.size());
}

int max_threads() noexcept { return omp_get_max_threads(); }

void set_threads(int n) noexcept {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace sobnet
