#include "flexi/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "flexi/error.hpp"
#include "flexi/measures.hpp"
#include "random.hpp"

namespace flexi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Candidates within this (relative) distance of the best are treated as tied.
// Quality sums of additive measures such as WRAcc are equal across binnings up
// to rounding; the tolerance keeps the tie-breaking rules effective for them.
constexpr double kTieTolerance = 1e-13;

double tie_slack(double best) { return kTieTolerance * std::max(1.0, std::abs(best)); }

const Column& binnable_column(const Dataset& dataset, std::size_t column) {
  const auto& col = dataset.column(column);
  if (col.kind() == ColumnKind::nominal) {
    throw Error(ErrorCode::kind_mismatch, "attribute '" + col.name() + "' is nominal and cannot be binned");
  }
  return col;
}

struct SortedRows {
  std::vector<std::uint32_t> rows;
  std::vector<double> values;
};

SortedRows sort_by_value(const Column& column, const Extent& extent) {
  SortedRows out;
  out.rows = extent.rows();
  std::stable_sort(out.rows.begin(), out.rows.end(), [&](std::uint32_t a, std::uint32_t b) {
    return column.ordered_value(a) < column.ordered_value(b);
  });
  out.values.reserve(out.rows.size());
  for (const auto r : out.rows) out.values.push_back(column.ordered_value(r));
  return out;
}

// Group end offsets: values[ends[g-1] .. ends[g]) share one value.
std::vector<std::size_t> group_ends(const std::vector<double>& values) {
  std::vector<std::size_t> ends;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values[i] != values[i - 1]) ends.push_back(i);
  }
  return ends;
}

// Chooses bins-1 group boundaries closest to the equal-frequency targets.
std::vector<std::size_t> choose_boundaries(const std::vector<std::size_t>& ends, std::size_t bins) {
  const std::size_t groups = ends.size();
  const double n = static_cast<double>(ends.back());
  std::vector<std::size_t> chosen;  // bin k ends after group chosen[k]
  std::size_t next = 0;
  for (std::size_t k = 1; k < bins; ++k) {
    const double target = static_cast<double>(k) * n / static_cast<double>(bins);
    const std::size_t hi = groups - 1 - (bins - k);
    std::size_t best = next;
    double best_gap = kInf;
    for (std::size_t g = next; g <= hi; ++g) {
      const double gap = std::abs(static_cast<double>(ends[g]) - target);
      if (gap < best_gap) {
        best_gap = gap;
        best = g;
      }
    }
    chosen.push_back(best);
    next = best + 1;
  }
  chosen.push_back(groups - 1);
  return chosen;
}

double average(std::span<const double> values) {
  double total = 0.0;
  for (const double v : values) total += v;
  return total / static_cast<double>(values.size());
}

std::vector<std::uint32_t> draw_with_replacement(std::span<const std::uint32_t> rows, double epsilon,
                                                 std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto draws = static_cast<std::size_t>(std::ceil(epsilon * static_cast<double>(rows.size())));
  auto rng = detail::make_rng(seed, stream, index);
  std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
  std::vector<std::uint32_t> out(draws);
  for (auto& r : out) r = rows[pick(rng)];
  return out;
}

bool subsampled(const MeasureKind& kind, const BinningOptions& options) {
  return kind.measure() == Measure::qr && options.epsilon < 1.0;
}

double bin_quality(const MeasureKind& kind, std::span<const std::uint32_t> rows, std::size_t bin_index,
                   std::size_t column, const Dataset& dataset, const GlobalTargetStats& stats,
                   const BinningOptions& options) {
  if (subsampled(kind, options)) {
    const auto sample = draw_with_replacement(rows, options.epsilon, options.seed, column, bin_index);
    return score_rows(kind, sample, dataset, stats);
  }
  return score_rows(kind, rows, dataset, stats);
}

BinningResult from_segments(const PrefixQualityTable& table, std::span<const double> cuts,
                            std::vector<std::pair<std::size_t, std::size_t>> spans) {
  BinningResult out;
  for (const auto& [first, last] : spans) {
    out.bins.push_back({first == 0 ? -kInf : cuts[first - 1], last + 1 == table.beta() ? kInf : cuts[last]});
    out.per_bin_quality.push_back(table.at(first, last));
  }
  out.spans = std::move(spans);
  out.lambda_star = out.bins.size();
  return out;
}

void check_table(const PrefixQualityTable& table, std::span<const double> cuts) {
  if (table.beta() == 0 || !table.complete()) {
    throw Error(ErrorCode::incomplete_table, "prefix quality table is incomplete");
  }
  if (cuts.size() + 1 != table.beta()) {
    throw Error(ErrorCode::invariant, "expected " + std::to_string(table.beta() - 1) + " cut values");
  }
}

}  // namespace

std::vector<std::uint32_t> InitialBins::union_rows(std::size_t first, std::size_t last) const {
  std::vector<std::uint32_t> out;
  for (std::size_t b = first; b <= last; ++b) out.insert(out.end(), rows[b].begin(), rows[b].end());
  return out;
}

Interval InitialBins::span_interval(std::size_t first, std::size_t last) const {
  return {first == 0 ? -kInf : cuts[first - 1], last + 1 == beta() ? kInf : cuts[last]};
}

InitialBins initial_bins(const Dataset& dataset, std::size_t column, const Extent& extent, std::size_t beta,
                         std::size_t min_bin_size) {
  const auto& col = binnable_column(dataset, column);
  if (extent.empty()) throw Error(ErrorCode::empty_extent, "cannot bin an empty extent");
  if (beta == 0) throw Error(ErrorCode::config, "number of initial bins must be at least 1");
  const auto sorted = sort_by_value(col, extent);
  const auto ends = group_ends(sorted.values);

  std::size_t bins = std::min(beta, ends.size());
  std::vector<std::size_t> chosen;
  while (true) {
    chosen = choose_boundaries(ends, bins);
    bool large_enough = true;
    std::size_t begin = 0;
    for (const auto g : chosen) {
      large_enough &= ends[g] - begin >= min_bin_size;
      begin = ends[g];
    }
    if (large_enough || bins == 1) break;
    --bins;
  }

  InitialBins out;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const std::size_t end = ends[chosen[k]];
    out.rows.emplace_back(sorted.rows.begin() + static_cast<std::ptrdiff_t>(begin),
                          sorted.rows.begin() + static_cast<std::ptrdiff_t>(end));
    if (k + 1 < chosen.size()) out.cuts.push_back(sorted.values[end - 1]);
    begin = end;
  }
  return out;
}

InitialBins subsample_bins(const InitialBins& bins, double epsilon, std::uint64_t seed, std::uint64_t stream) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::config, "subsampling rate must lie in (0, 1]");
  if (epsilon == 1.0) return bins;
  InitialBins out;
  out.cuts = bins.cuts;
  out.rows.reserve(bins.beta());
  for (std::size_t b = 0; b < bins.beta(); ++b) {
    out.rows.push_back(draw_with_replacement(bins.rows[b], epsilon, seed, stream, b));
  }
  return out;
}

PrefixQualityTable::PrefixQualityTable(std::size_t beta)
    : beta_(beta), values_(beta * (beta + 1) / 2, std::numeric_limits<double>::quiet_NaN()) {}

std::size_t PrefixQualityTable::index(std::size_t j, std::size_t i) const {
  if (j > i || i >= beta_) throw Error(ErrorCode::invariant, "prefix table index out of range");
  return i * (i + 1) / 2 + j;
}

bool PrefixQualityTable::complete() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

PrefixQualityTable precompute_wracc(const InitialBins& bins, const Dataset& dataset, const GlobalTargetStats& stats) {
  if (!stats.binary) throw Error(ErrorCode::inapplicable, "statistics were not computed for WRAcc");
  const auto codes = dataset.column(stats.binary->column).codes();
  const auto positive = stats.binary->positive_code;
  const std::size_t beta = bins.beta();
  std::vector<std::size_t> count_pos(beta, 0);
  std::vector<std::size_t> size(beta, 0);
  PrefixQualityTable table(beta);
  for (std::size_t i = 0; i < beta; ++i) {
    for (const auto r : bins.rows[i]) count_pos[i] += codes[r] == positive ? 1U : 0U;
    size[i] = bins.rows[i].size();
    table.set(i, i, wracc(size[i], count_pos[i], stats));
  }
  for (std::size_t i = 1; i < beta; ++i) {
    std::size_t theta = count_pos[i];
    std::size_t s = size[i];
    for (std::size_t j = i; j-- > 0;) {
      theta += count_pos[j];
      s += size[j];
      table.set(j, i, wracc(s, theta, stats));
    }
  }
  return table;
}

PrefixQualityTable precompute_zscore(const InitialBins& bins, const Dataset& dataset, const GlobalTargetStats& stats) {
  if (!stats.numeric) throw Error(ErrorCode::inapplicable, "statistics were not computed for z-score");
  const auto values = dataset.column(stats.numeric->column).values();
  const std::size_t beta = bins.beta();
  std::vector<long double> bin_mean(beta, 0.0L);
  std::vector<std::size_t> size(beta, 0);
  PrefixQualityTable table(beta);
  for (std::size_t i = 0; i < beta; ++i) {
    long double sum = 0.0L;
    for (const auto r : bins.rows[i]) sum += values[r];
    size[i] = bins.rows[i].size();
    bin_mean[i] = sum / static_cast<long double>(size[i]);
    table.set(i, i, zscore(size[i], static_cast<double>(bin_mean[i]), stats));
  }
  for (std::size_t i = 1; i < beta; ++i) {
    auto theta = static_cast<long double>(size[i]);
    long double mu = bin_mean[i];
    for (std::size_t j = i; j-- > 0;) {
      const auto cj = static_cast<long double>(size[j]);
      mu = (theta * mu + cj * bin_mean[j]) / (theta + cj);
      theta += cj;
      table.set(j, i, zscore(static_cast<std::size_t>(theta), static_cast<double>(mu), stats));
    }
  }
  return table;
}

PrefixQualityTable precompute_distributional(const InitialBins& bins, const GlobalTargetStats& stats, Measure kind) {
  if (kind != Measure::kl && kind != Measure::hd) {
    throw Error(ErrorCode::invariant, "distributional precomputation is for kl and hd only");
  }
  if (!stats.joint) throw Error(ErrorCode::inapplicable, "statistics were not computed for kl/hd");
  const auto& joint = *stats.joint;
  const std::size_t beta = bins.beta();
  PrefixQualityTable table(beta);
  std::vector<std::size_t> counts(joint.tuples(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t i = 0; i < beta; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    touched.clear();
    std::size_t s = 0;
    for (std::size_t j = i + 1; j-- > 0;) {
      for (const auto r : bins.rows[j]) {
        const auto t = joint.row_tuple[r];
        if (counts[t]++ == 0) touched.push_back(t);
      }
      s += bins.rows[j].size();
      table.set(j, i, kind == Measure::kl ? kl_from_counts(counts, touched, s, stats)
                                          : hd_from_counts(counts, s, stats));
    }
  }
  return table;
}

PrefixQualityTable precompute_qr(const InitialBins& bins, const GlobalTargetStats& stats, QrWeight weight) {
  const std::size_t beta = bins.beta();
  PrefixQualityTable table(beta);
  std::vector<QrTerms> single(beta);
  for (std::size_t i = 0; i < beta; ++i) {
    single[i] = qr_terms(bins.rows[i], stats);
    table.set(i, i, qr_score(single[i], stats, weight));
  }
  // pair_int[i][j] = int(c_j, c_i) for j < i.
  std::vector<std::vector<double>> pair_int(beta);
  for (std::size_t i = 1; i < beta; ++i) {
    pair_int[i].resize(i);
    for (std::size_t j = 0; j < i; ++j) pair_int[i][j] = int_term(bins.rows[j], bins.rows[i], stats);
  }
  // prefix_int[i][j] = int(c_j u ... u c_{i-1}, c_i), additive over the union.
  std::vector<std::vector<double>> prefix_int(beta);
  for (std::size_t i = 1; i < beta; ++i) {
    prefix_int[i].resize(i);
    double theta = 0.0;
    for (std::size_t j = i; j-- > 0;) {
      theta += pair_int[i][j];
      prefix_int[i][j] = theta;
    }
  }
  // merged[j] holds the terms of c_j u ... u c_{i-1} while sweeping i.
  std::vector<QrTerms> merged(single);
  for (std::size_t i = 1; i < beta; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      merged[j] = merge_terms(merged[j], single[i], prefix_int[i][j]);
      table.set(j, i, qr_score(merged[j], stats, weight));
    }
  }
  return table;
}

PrefixQualityTable precompute(const MeasureKind& kind, const InitialBins& bins, const Dataset& dataset,
                              const GlobalTargetStats& stats) {
  switch (kind.measure()) {
    case Measure::wracc: return precompute_wracc(bins, dataset, stats);
    case Measure::zscore: return precompute_zscore(bins, dataset, stats);
    case Measure::kl:
    case Measure::hd: return precompute_distributional(bins, stats, kind.measure());
    case Measure::qr: return precompute_qr(bins, stats, kind.qr_weight());
  }
  throw Error(ErrorCode::invariant, "unknown measure");
}

BinningResult flexi_dp(const PrefixQualityTable& table, std::span<const double> cuts) {
  check_table(table, cuts);
  const std::size_t beta = table.beta();
  // qual[l][i]: best total of l bins over initial bins 0..i; from[l][i] is
  // the last initial bin of the first l-1 bins in that solution.
  std::vector<std::vector<double>> qual(beta + 1, std::vector<double>(beta, -kInf));
  std::vector<std::vector<std::size_t>> from(beta + 1, std::vector<std::size_t>(beta, 0));
  for (std::size_t i = 0; i < beta; ++i) qual[1][i] = table.at(0, i);
  for (std::size_t l = 2; l <= beta; ++l) {
    for (std::size_t i = l - 1; i < beta; ++i) {
      double best = -kInf;
      for (std::size_t j = l - 2; j < i; ++j) best = std::max(best, qual[l - 1][j] + table.at(j + 1, i));
      const double slack = tie_slack(best);
      for (std::size_t j = l - 2; j < i; ++j) {
        const double candidate = qual[l - 1][j] + table.at(j + 1, i);
        if (candidate >= best - slack) {
          qual[l][i] = candidate;
          from[l][i] = j;
          break;
        }
      }
    }
  }
  double best_average = -kInf;
  for (std::size_t l = 1; l <= beta; ++l) {
    best_average = std::max(best_average, qual[l][beta - 1] / static_cast<double>(l));
  }
  // Among tied averages prefer the finer binning: it exposes more features.
  std::size_t lambda = 1;
  const double slack = tie_slack(best_average);
  for (std::size_t l = beta; l >= 1; --l) {
    if (qual[l][beta - 1] / static_cast<double>(l) >= best_average - slack) {
      lambda = l;
      break;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> spans(lambda);
  std::size_t last = beta - 1;
  for (std::size_t l = lambda; l >= 2; --l) {
    const std::size_t j = from[l][last];
    spans[l - 1] = {j + 1, last};
    last = j;
  }
  spans[0] = {0, last};
  auto result = from_segments(table, cuts, std::move(spans));
  result.objective = qual[lambda][beta - 1] / static_cast<double>(lambda);
  return result;
}

BinningResult sum_dp(const PrefixQualityTable& table, std::span<const double> cuts) {
  check_table(table, cuts);
  const std::size_t beta = table.beta();
  // qual[i]: best total over initial bins 0..i-1 (qual[0] = 0 is the empty prefix).
  std::vector<double> qual(beta + 1, 0.0);
  std::vector<std::size_t> from(beta + 1, 0);
  for (std::size_t i = 1; i <= beta; ++i) {
    double best = -kInf;
    for (std::size_t j = 0; j < i; ++j) best = std::max(best, qual[j] + table.at(j, i - 1));
    const double slack = tie_slack(best);
    for (std::size_t j = 0; j < i; ++j) {
      const double candidate = qual[j] + table.at(j, i - 1);
      if (candidate >= best - slack) {
        qual[i] = candidate;
        from[i] = j;
        break;
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t end = beta; end > 0; end = from[end]) spans.emplace_back(from[end], end - 1);
  std::reverse(spans.begin(), spans.end());
  auto result = from_segments(table, cuts, std::move(spans));
  result.objective = qual[beta];
  return result;
}

BinningMethod parse_binning_method(std::string_view name) {
  if (name == "flexi") return BinningMethod::flexi;
  if (name == "sum") return BinningMethod::sum;
  if (name == "ef") return BinningMethod::ef;
  if (name == "ew") return BinningMethod::ew;
  throw Error(ErrorCode::config, "unknown binning method '" + std::string(name) + "' (flexi|sum|ef|ew)");
}

std::string_view to_string(BinningMethod method) noexcept {
  switch (method) {
    case BinningMethod::flexi: return "flexi";
    case BinningMethod::sum: return "sum";
    case BinningMethod::ef: return "ef";
    case BinningMethod::ew: return "ew";
  }
  return "?";
}

BinnedAttribute equal_frequency_bins(const Dataset& dataset, std::size_t column, const Extent& extent,
                                     std::size_t count, const MeasureKind& kind, const GlobalTargetStats& stats,
                                     const BinningOptions& options) {
  const auto bins = initial_bins(dataset, column, extent, count, options.min_bin_size);
  BinnedAttribute out;
  for (std::size_t b = 0; b < bins.beta(); ++b) {
    out.result.bins.push_back(bins.span_interval(b, b));
    out.result.spans.emplace_back(b, b);
    out.result.per_bin_quality.push_back(bin_quality(kind, bins.rows[b], b, column, dataset, stats, options));
    out.extents.push_back(Extent::from_rows(dataset.rows(), bins.rows[b]));
  }
  out.result.lambda_star = bins.beta();
  out.result.objective = average(out.result.per_bin_quality);
  const auto& col = dataset.column(column);
  out.degenerate = bins.beta() == 1 && col.ordered_value(bins.rows[0].front()) == col.ordered_value(bins.rows[0].back());
  return out;
}

BinnedAttribute equal_width_bins(const Dataset& dataset, std::size_t column, const Extent& extent, std::size_t count,
                                 const MeasureKind& kind, const GlobalTargetStats& stats,
                                 const BinningOptions& options) {
  const auto& col = binnable_column(dataset, column);
  if (extent.empty()) throw Error(ErrorCode::empty_extent, "cannot bin an empty extent");
  if (count == 0) throw Error(ErrorCode::config, "number of bins must be at least 1");
  const auto rows = extent.rows();
  double lo = kInf;
  double hi = -kInf;
  for (const auto r : rows) {
    lo = std::min(lo, col.ordered_value(r));
    hi = std::max(hi, col.ordered_value(r));
  }
  std::vector<double> cuts;
  const double width = (hi - lo) / static_cast<double>(count);
  for (std::size_t k = 1; k < count && hi > lo; ++k) {
    double cut = lo + static_cast<double>(k) * width;
    if (col.kind() == ColumnKind::ordinal) cut = std::floor(cut);
    if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
  }
  std::vector<std::vector<std::uint32_t>> members(cuts.size() + 1);
  for (const auto r : rows) {
    const auto pos = std::lower_bound(cuts.begin(), cuts.end(), col.ordered_value(r)) - cuts.begin();
    members[static_cast<std::size_t>(pos)].push_back(r);
  }
  std::vector<std::size_t> kept;
  for (std::size_t b = 0; b < members.size(); ++b) {
    if (!members[b].empty()) kept.push_back(b);
  }
  BinnedAttribute out;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const double lower = k == 0 ? -kInf : out.result.bins.back().upper;
    // An empty bin is absorbed by its non-empty predecessor.
    const double upper = k + 1 == kept.size() ? kInf : cuts[kept[k + 1] - 1];
    out.result.bins.push_back({lower, upper});
    out.result.per_bin_quality.push_back(
        bin_quality(kind, members[kept[k]], kept[k], column, dataset, stats, options));
    out.extents.push_back(Extent::from_rows(dataset.rows(), members[kept[k]]));
  }
  out.result.lambda_star = kept.size();
  out.result.objective = average(out.result.per_bin_quality);
  out.degenerate = lo == hi;
  return out;
}

BinnedAttribute bin_attribute(const Dataset& dataset, const GlobalTargetStats& stats, const MeasureKind& kind,
                              std::size_t column, const Extent& extent, const BinningOptions& options) {
  switch (options.method) {
    case BinningMethod::ef: return equal_frequency_bins(dataset, column, extent, options.beta, kind, stats, options);
    case BinningMethod::ew: return equal_width_bins(dataset, column, extent, options.beta, kind, stats, options);
    case BinningMethod::flexi:
    case BinningMethod::sum: break;
  }
  const auto bins = initial_bins(dataset, column, extent, options.beta, options.min_bin_size);
  const auto table = subsampled(kind, options)
                         ? precompute(kind, subsample_bins(bins, options.epsilon, options.seed, column), dataset, stats)
                         : precompute(kind, bins, dataset, stats);
  BinnedAttribute out;
  out.result = options.method == BinningMethod::flexi ? flexi_dp(table, bins.cuts) : sum_dp(table, bins.cuts);
  for (const auto& [first, last] : out.result.spans) {
    out.extents.push_back(Extent::from_rows(dataset.rows(), bins.union_rows(first, last)));
  }
  const auto& col = dataset.column(column);
  out.degenerate = bins.beta() == 1 && col.ordered_value(bins.rows[0].front()) == col.ordered_value(bins.rows[0].back());
  return out;
}

}  // namespace flexi
