#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace flexi::kernels {

/// Gathered target points in the transformed u-space, row-major n x dims.
/// Rows may repeat (subsamples drawn with replacement are multisets).
struct PointSet {
  std::size_t dims = 0;
  std::vector<double> coords;

  [[nodiscard]] std::size_t size() const noexcept { return dims == 0 ? 0 : coords.size() / dims; }
};

PointSet gather(std::span<const double> points, std::size_t dims, std::span<const std::uint32_t> rows);

// All three sums are over ordered pairs (i, j) of prod_k min(a_ik, b_jk).
//
// The parallel versions split the outer index across OpenMP threads and
// reduce the per-row partial sums in row order, so they return bit-identical
// results to the serial reference regardless of thread count or schedule.

/// sum_{i,j in a} w(a_i, a_j), diagonal included.
double self_sum(const PointSet& a);
/// sum_{i in a, j in b} w(a_i, b_j).
double cross_sum(const PointSet& a, const PointSet& b);
/// out[i] = sum_{j in b} w(a_i, b_j).
std::vector<double> row_cross_sums(const PointSet& a, const PointSet& b);

namespace serial {
double self_sum(const PointSet& a);
double cross_sum(const PointSet& a, const PointSet& b);
std::vector<double> row_cross_sums(const PointSet& a, const PointSet& b);
}  // namespace serial

}  // namespace flexi::kernels
