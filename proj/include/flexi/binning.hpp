#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "flexi/dataset.hpp"
#include "flexi/extent.hpp"
#include "flexi/measure_kind.hpp"
#include "flexi/subgroup.hpp"
#include "flexi/target_stats.hpp"

namespace flexi {

/// Order-respecting partition of a working extent into non-empty bins.
/// `cuts[i]` is the largest attribute value in bin i, so bin i covers
/// (cuts[i-1], cuts[i]]. `rows[i]` may be a multiset after subsampling.
struct InitialBins {
  std::vector<double> cuts;
  std::vector<std::vector<std::uint32_t>> rows;

  [[nodiscard]] std::size_t beta() const noexcept { return rows.size(); }
  // Rows of bins first..last (0-based, inclusive), concatenated.
  [[nodiscard]] std::vector<std::uint32_t> union_rows(std::size_t first, std::size_t last) const;
  [[nodiscard]] Interval span_interval(std::size_t first, std::size_t last) const;
};

/// Equal-frequency partition into min(beta, distinct values) bins without
/// splitting ties; beta is lowered until every bin holds min_bin_size rows.
InitialBins initial_bins(const Dataset& dataset, std::size_t column, const Extent& extent, std::size_t beta,
                         std::size_t min_bin_size = 1);

/// Replaces each bin by ceil(epsilon * |bin|) rows drawn with replacement from
/// an RNG seeded by (seed, stream, bin index). epsilon == 1 returns the input.
InitialBins subsample_bins(const InitialBins& bins, double epsilon, std::uint64_t seed, std::uint64_t stream = 0);

/// phi(c_j u ... u c_i) for 0 <= j <= i < beta.
class PrefixQualityTable {
 public:
  explicit PrefixQualityTable(std::size_t beta);

  [[nodiscard]] std::size_t beta() const noexcept { return beta_; }
  [[nodiscard]] double at(std::size_t j, std::size_t i) const { return values_[index(j, i)]; }
  void set(std::size_t j, std::size_t i, double value) { values_[index(j, i)] = value; }
  // Every entry assigned and finite.
  [[nodiscard]] bool complete() const noexcept;

 private:
  [[nodiscard]] std::size_t index(std::size_t j, std::size_t i) const;

  std::size_t beta_;
  std::vector<double> values_;
};

PrefixQualityTable precompute_wracc(const InitialBins& bins, const Dataset& dataset, const GlobalTargetStats& stats);
PrefixQualityTable precompute_zscore(const InitialBins& bins, const Dataset& dataset, const GlobalTargetStats& stats);
PrefixQualityTable precompute_distributional(const InitialBins& bins, const GlobalTargetStats& stats, Measure kind);
PrefixQualityTable precompute_qr(const InitialBins& bins, const GlobalTargetStats& stats, QrWeight weight);
PrefixQualityTable precompute(const MeasureKind& kind, const InitialBins& bins, const Dataset& dataset,
                              const GlobalTargetStats& stats);

struct BinningResult {
  std::vector<Interval> bins;
  std::vector<double> per_bin_quality;
  // Initial-bin ranges [first, last] behind each output bin (empty for EW).
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t lambda_star = 0;
  double objective = 0.0;
};

/// Best average-quality merge of the initial bins. `cuts` are the beta-1
/// initial cut values used to label the output intervals.
BinningResult flexi_dp(const PrefixQualityTable& table, std::span<const double> cuts);
/// Best total-quality merge of the initial bins.
BinningResult sum_dp(const PrefixQualityTable& table, std::span<const double> cuts);

enum class BinningMethod { flexi, sum, ef, ew };

[[nodiscard]] BinningMethod parse_binning_method(std::string_view name);
[[nodiscard]] std::string_view to_string(BinningMethod method) noexcept;

struct BinningOptions {
  BinningMethod method = BinningMethod::flexi;
  std::size_t beta = 20;
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::size_t min_bin_size = 1;
};

struct BinnedAttribute {
  BinningResult result;
  std::vector<Extent> extents;  // true (unsampled) cover of each output bin
  bool degenerate = false;      // the extent holds a single attribute value
};

/// Equal-width bins over [min, max] of the extent (rank codes for ordinal
/// attributes); empty bins are merged into their neighbour.
BinnedAttribute equal_width_bins(const Dataset& dataset, std::size_t column, const Extent& extent, std::size_t count,
                                 const MeasureKind& kind, const GlobalTargetStats& stats,
                                 const BinningOptions& options = {});
BinnedAttribute equal_frequency_bins(const Dataset& dataset, std::size_t column, const Extent& extent,
                                     std::size_t count, const MeasureKind& kind, const GlobalTargetStats& stats,
                                     const BinningOptions& options = {});

/// Full pipeline for one numeric/ordinal attribute over a working extent.
BinnedAttribute bin_attribute(const Dataset& dataset, const GlobalTargetStats& stats, const MeasureKind& kind,
                              std::size_t column, const Extent& extent, const BinningOptions& options);

}  // namespace flexi
