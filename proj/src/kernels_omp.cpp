#include <omp.h>

#include "flexi/error.hpp"
#include "flexi/kernels.hpp"
#include "kernel_rows.hpp"

namespace flexi::kernels {

namespace {

// Below this many pair evaluations a parallel region costs more than it saves.
constexpr std::size_t kParallelThreshold = 1U << 14;

double ordered_total(const std::vector<double>& partial) {
  double total = 0.0;
  for (const double p : partial) total += p;
  return total;
}

}  // namespace

double self_sum(const PointSet& a) {
  const std::size_t n = a.size();
  if (n * n < kParallelThreshold) return serial::self_sum(a);
  std::vector<double> partial(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  // Rows shrink towards the end of the triangle; dynamic chunks balance that.
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    partial[static_cast<std::size_t>(i)] =
        detail::self_row(a.coords.data(), a.dims, static_cast<std::size_t>(i), n);
  }
  return ordered_total(partial);
}

std::vector<double> row_cross_sums(const PointSet& a, const PointSet& b) {
  if (a.dims != b.dims) throw Error(ErrorCode::invariant, "point sets differ in dimension");
  if (a.size() * b.size() < kParallelThreshold) return serial::row_cross_sums(a, b);
  std::vector<double> out(a.size());
  const auto count = static_cast<std::ptrdiff_t>(a.size());
  const std::size_t nb = b.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto row = static_cast<std::size_t>(i);
    out[row] = detail::row_sum(a.coords.data() + row * a.dims, b.coords.data(), a.dims, 0, nb);
  }
  return out;
}

double cross_sum(const PointSet& a, const PointSet& b) { return ordered_total(row_cross_sums(a, b)); }

}  // namespace flexi::kernels
