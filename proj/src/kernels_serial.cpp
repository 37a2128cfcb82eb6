#include <stdexcept>

#include "flexi/error.hpp"
#include "flexi/kernels.hpp"
#include "kernel_rows.hpp"

namespace flexi::kernels {

PointSet gather(std::span<const double> points, std::size_t dims, std::span<const std::uint32_t> rows) {
  PointSet out;
  out.dims = dims;
  out.coords.resize(rows.size() * dims);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* src = points.data() + static_cast<std::size_t>(rows[i]) * dims;
    std::copy(src, src + dims, out.coords.begin() + static_cast<std::ptrdiff_t>(i * dims));
  }
  return out;
}

namespace serial {

double self_sum(const PointSet& a) {
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += detail::self_row(a.coords.data(), a.dims, i, n);
  return total;
}

std::vector<double> row_cross_sums(const PointSet& a, const PointSet& b) {
  if (a.dims != b.dims) throw Error(ErrorCode::invariant, "point sets differ in dimension");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = detail::row_sum(a.coords.data() + i * a.dims, b.coords.data(), a.dims, 0, b.size());
  }
  return out;
}

double cross_sum(const PointSet& a, const PointSet& b) {
  double total = 0.0;
  for (const double r : serial::row_cross_sums(a, b)) total += r;
  return total;
}

}  // namespace serial
}  // namespace flexi::kernels
