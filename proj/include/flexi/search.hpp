#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexi/binning.hpp"
#include "flexi/dataset.hpp"
#include "flexi/extent.hpp"
#include "flexi/measure_kind.hpp"
#include "flexi/subgroup.hpp"
#include "flexi/target_stats.hpp"

namespace flexi {

struct BeamConfig {
  std::size_t beam_width = 10;
  std::size_t max_depth = 2;
  std::size_t top_k = 50;
  MeasureKind measure = MeasureKind::wracc();
  BinningMethod binning_method = BinningMethod::flexi;
  std::size_t beta = 20;
  double epsilon = 1.0;
  // Unset means max(1, ceil(0.01 m)).
  std::optional<std::size_t> min_support;
  std::uint64_t seed = 0;
  std::size_t min_bin_size = 1;

  void validate() const;
  [[nodiscard]] std::size_t resolved_min_support(std::size_t m) const;
  [[nodiscard]] BinningOptions binning_options() const;
};

struct Feature {
  Condition condition;
  Extent extent;  // rows of the working extent satisfying the condition
};

struct ResultEntry {
  SubgroupDescription description;
  std::string key;
  double quality = 0.0;
  std::size_t support = 0;
  Extent extent;
};

// Quality descending, then smaller support, then canonical key.
[[nodiscard]] bool ranks_before(const ResultEntry& a, const ResultEntry& b) noexcept;

/// Best `capacity` entries seen, at most one per canonical key.
class ResultSet {
 public:
  explicit ResultSet(std::size_t capacity) : capacity_(capacity) {}

  void offer(ResultEntry entry);
  [[nodiscard]] const std::vector<ResultEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  std::vector<ResultEntry> entries_;
};

/// One-dimensional features over `extent`: an Equals per nominal value seen
/// in the extent, the binning intervals for numeric/ordinal attributes.
/// Attributes used by `exclude` are skipped; features below min_support are
/// dropped.
[[nodiscard]] std::vector<Feature> generate_features(const Dataset& dataset, const GlobalTargetStats& stats,
                                                     const Extent& extent, const BeamConfig& config,
                                                     const SubgroupDescription& exclude = {});

/// Quality used by the search. Exact unless the measure is qr with
/// epsilon < 1, in which case it is the score of ceil(epsilon * s) rows drawn
/// with replacement from the extent by a generator seeded from the config
/// seed and the description's canonical key.
[[nodiscard]] double subgroup_quality(const Dataset& dataset, const GlobalTargetStats& stats,
                                      const BeamConfig& config, const std::string& key, const Extent& extent);

[[nodiscard]] ResultSet beam_search(const Dataset& dataset, const GlobalTargetStats& stats, const BeamConfig& config);

/// Recomputes every quality exactly under `stats` and re-sorts.
[[nodiscard]] ResultSet rescore(const ResultSet& results, const Dataset& dataset, const GlobalTargetStats& stats);

[[nodiscard]] double top_k_average(const ResultSet& results, std::size_t k);

}  // namespace flexi
