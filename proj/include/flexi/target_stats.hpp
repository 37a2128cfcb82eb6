#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "flexi/dataset.hpp"
#include "flexi/extent.hpp"
#include "flexi/measure_kind.hpp"

namespace flexi {

struct BinaryTargetStats {
  std::size_t column = 0;
  std::int32_t positive_code = 0;
  std::size_t m_plus = 0;
};

struct NumericTargetStats {
  std::size_t column = 0;
  double mu0 = 0.0;
  double sigma0 = 0.0;  // population standard deviation
};

struct TupleHash {
  std::size_t operator()(const std::vector<std::int32_t>& key) const noexcept;
};

/// Empirical joint pmf of the (nominal/ordinal) target block. Each distinct
/// tuple observed in the data gets a dense id; per-row ids let extent pmfs be
/// built by counting instead of hashing.
struct JointPmf {
  std::vector<std::size_t> columns;
  std::vector<std::uint32_t> row_tuple;
  std::vector<double> probability;
  std::vector<std::size_t> count;
  std::unordered_map<std::vector<std::int32_t>, std::uint32_t, TupleHash> index;

  [[nodiscard]] std::size_t tuples() const noexcept { return probability.size(); }
  [[nodiscard]] std::optional<double> probability_of(const std::vector<std::int32_t>& tuple) const;
};

struct TargetBounds {
  ColumnKind kind = ColumnKind::numeric;
  double lower = 0.0;  // observed minimum (numeric) or 0 (ordinal rank)
  double upper = 0.0;  // observed maximum V_k (numeric) or |dom|-1 (ordinal)
  std::size_t domain_size = 0;
  // h_k(x, y) = ceiling - max(x, y): V_k for numeric, |dom| for ordinal ranks.
  double ceiling = 0.0;
};

struct QrSampling {
  double epsilon = 1.0;
  std::uint64_t seed = 0;
};

/// Everything the quadratic measure needs about the full data.
///
/// Target values are stored transformed, u = ceiling - x, so that the pair
/// weight prod_k h_k(x_i, x_j) becomes prod_k min(u_ik, u_jk). `row_cross[i]`
/// is the cross sum of row i against the reference rows (all of D, or a
/// subsample of D when epsilon < 1); e_global is the reference self sum.
struct QrStats {
  std::vector<std::size_t> columns;
  std::vector<TargetBounds> bounds;
  std::size_t dims = 0;
  std::vector<double> points;  // m x dims, row-major, transformed
  std::vector<std::uint32_t> reference_rows;
  std::vector<double> row_cross;
  double e_global = 0.0;
  QrSampling sampling;

  [[nodiscard]] std::size_t reference_size() const noexcept { return reference_rows.size(); }
  [[nodiscard]] std::span<const double> point(std::size_t row) const noexcept {
    return {points.data() + row * dims, dims};
  }
};

struct GlobalTargetStats {
  MeasureKind measure = MeasureKind::wracc();
  std::size_t m = 0;
  std::optional<BinaryTargetStats> binary;
  std::optional<NumericTargetStats> numeric;
  std::optional<JointPmf> joint;
  std::optional<QrStats> qr;
};

/// Populates exactly the fields `measure` needs. For qr, epsilon < 1 computes
/// the global term and row cross sums against an epsilon-subsample of D.
GlobalTargetStats compute_global_stats(const Dataset& dataset, const MeasureKind& measure,
                                       QrSampling sampling = {});

/// The same statistics with `extent` in the role of the full data: m, the
/// reference distribution and the qr reference rows all come from the extent.
/// Row-indexed arrays keep the full dataset's indexing. For qr with
/// epsilon < 1 the reference is an epsilon-subsample of the extent drawn with
/// `sample_index` as the generator index. A constant numeric target inside
/// the extent keeps the outer sigma0 (every z-score is then zero).
GlobalTargetStats restrict_stats(const GlobalTargetStats& stats, const Dataset& dataset, const Extent& extent,
                                 std::uint64_t sample_index = 0);

}  // namespace flexi
