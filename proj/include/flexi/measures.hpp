#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flexi/dataset.hpp"
#include "flexi/extent.hpp"
#include "flexi/measure_kind.hpp"
#include "flexi/target_stats.hpp"

namespace flexi {

/// Pairwise-interaction sums of the quadratic measure for one row multiset S:
///   e1 = sum_{i,j in S} prod_k h_k(x_i, x_j)
///   e2 = sum_{i in S, j in reference} prod_k h_k(x_i, x_j)
struct QrTerms {
  double e1 = 0.0;
  double e2 = 0.0;
  std::size_t s = 0;
};

/// Which target layouts a measure accepts:
///   wracc   one nominal or ordinal target
///   zscore  one numeric target
///   kl, hd  one or more targets, all nominal/ordinal
///   qr      one or more targets, all numeric/ordinal
[[nodiscard]] bool applicability(const MeasureKind& kind, std::span<const ColumnKind> targets) noexcept;
[[nodiscard]] bool applicability(const MeasureKind& kind, const Dataset& dataset);

// -(x log x) - (1-x) log(1-x) with 0 log 0 = 0.
[[nodiscard]] double binary_entropy(double fraction) noexcept;

[[nodiscard]] double wracc(std::size_t s, std::size_t s_plus, const GlobalTargetStats& stats);
[[nodiscard]] double zscore(std::size_t s, double mu, const GlobalTargetStats& stats);

// kl and hd from tuple counts of an extent: `counts[t]` is the number of
// extent rows carrying tuple id t, `touched` lists the ids with counts > 0.
[[nodiscard]] double kl_from_counts(std::span<const std::size_t> counts,
                                    std::span<const std::uint32_t> touched, std::size_t s,
                                    const GlobalTargetStats& stats);
[[nodiscard]] double hd_from_counts(std::span<const std::size_t> counts, std::size_t s,
                                    const GlobalTargetStats& stats);

[[nodiscard]] double kl(const Extent& extent, const GlobalTargetStats& stats);
[[nodiscard]] double hd(const Extent& extent, const GlobalTargetStats& stats);

[[nodiscard]] QrTerms qr_terms(std::span<const std::uint32_t> rows, const GlobalTargetStats& stats);
[[nodiscard]] QrTerms qr_terms(const Extent& extent, const GlobalTargetStats& stats);

/// ID = e1/s^2 - 2 e2/(s m) + e/m^2, clamped at zero, times f(s). Under
/// subsampling, m is the reference sample size and s the drawn row count.
[[nodiscard]] double qr_score(const QrTerms& terms, const GlobalTargetStats& stats, QrWeight weight);

[[nodiscard]] double int_term(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                              const GlobalTargetStats& stats);
/// Throws if the extents overlap.
[[nodiscard]] double int_term(const Extent& a, const Extent& b, const GlobalTargetStats& stats);

[[nodiscard]] QrTerms merge_terms(const QrTerms& a, const QrTerms& b, double int_ab) noexcept;

/// Quality of an extent under `kind`, computed from scratch.
[[nodiscard]] double score(const MeasureKind& kind, const Extent& extent, const Dataset& dataset,
                           const GlobalTargetStats& stats);
/// Same, for an explicit row list (may be a multiset for qr subsamples).
[[nodiscard]] double score_rows(const MeasureKind& kind, std::span<const std::uint32_t> rows,
                                const Dataset& dataset, const GlobalTargetStats& stats);

}  // namespace flexi
