#pragma once

#include <cstddef>
#include <span>

namespace haptofv {

// Deterministic pairwise (cascade) summation, fixed recursion order.
double pairwise_sum(std::span<const double> x);

// Integer power by repeated squaring, k >= 0.
double ipow(double s, int k);

} // namespace haptofv
