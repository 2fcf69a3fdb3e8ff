#include "haptofv/numerics.hpp"

namespace haptofv {

namespace {

double pairwise_recurse(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_recurse(x, half) + pairwise_recurse(x + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> x) {
  return pairwise_recurse(x.data(), x.size());
}

double ipow(double s, int k) {
  double result = 1.0;
  double base = s;
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) result *= base;
    base *= base;
  }
  return result;
}

} // namespace haptofv
