#pragma once

// Per-row inner loops shared by the serial and OpenMP kernels. Both drivers
// call exactly these functions and reduce in row order, which is what makes
// their results bit-identical.

#include <algorithm>
#include <cstddef>

namespace flexi::kernels::detail {

template <std::size_t Dims>
inline double row_sum_fixed(const double* x, const double* b, std::size_t begin, std::size_t end) {
  double acc = 0.0;
  for (std::size_t j = begin; j < end; ++j) {
    const double* y = b + j * Dims;
    double w = std::min(x[0], y[0]);
    if constexpr (Dims > 1) w *= std::min(x[1], y[1]);
    if constexpr (Dims > 2) w *= std::min(x[2], y[2]);
    if constexpr (Dims > 3) w *= std::min(x[3], y[3]);
    acc += w;
  }
  return acc;
}

inline double row_sum_generic(const double* x, const double* b, std::size_t dims, std::size_t begin,
                              std::size_t end) {
  double acc = 0.0;
  for (std::size_t j = begin; j < end; ++j) {
    const double* y = b + j * dims;
    double w = 1.0;
    for (std::size_t k = 0; k < dims; ++k) w *= std::min(x[k], y[k]);
    acc += w;
  }
  return acc;
}

// sum over j in [begin, end) of w(x, b_j).
inline double row_sum(const double* x, const double* b, std::size_t dims, std::size_t begin,
                      std::size_t end) {
  switch (dims) {
    case 1: return row_sum_fixed<1>(x, b, begin, end);
    case 2: return row_sum_fixed<2>(x, b, begin, end);
    case 3: return row_sum_fixed<3>(x, b, begin, end);
    case 4: return row_sum_fixed<4>(x, b, begin, end);
    default: return row_sum_generic(x, b, dims, begin, end);
  }
}

// Contribution of row i to the symmetric self sum: its diagonal term plus
// twice the strictly-upper row.
inline double self_row(const double* a, std::size_t dims, std::size_t i, std::size_t n) {
  const double* x = a + i * dims;
  double diag = 1.0;
  for (std::size_t k = 0; k < dims; ++k) diag *= x[k];
  return diag + 2.0 * row_sum(x, a, dims, i + 1, n);
}

}  // namespace flexi::kernels::detail
