#include "flexi/search.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <unordered_set>
#include <utility>

#include "flexi/error.hpp"
#include "flexi/measures.hpp"
#include "random.hpp"

namespace flexi {

namespace {

// Stream for candidate subsamples; attribute streams are column indices.
constexpr std::uint64_t kCandidateStream = ~std::uint64_t{0} - 1;

std::uint64_t fnv1a(const std::string& text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<Feature> nominal_features(const Dataset& dataset, std::size_t column, const Extent& extent) {
  const auto& col = dataset.column(column);
  const auto codes = col.codes();
  std::vector<std::vector<std::uint32_t>> members(col.domain().size());
  extent.for_each([&](std::uint32_t r) { members[static_cast<std::size_t>(codes[r])].push_back(r); });
  std::vector<Feature> out;
  for (std::size_t v = 0; v < members.size(); ++v) {
    if (members[v].empty()) continue;
    out.push_back({Condition::equals(col.name(), col.domain()[v]), Extent::from_rows(dataset.rows(), members[v])});
  }
  return out;
}

std::vector<Feature> binned_features(const Dataset& dataset, const GlobalTargetStats& stats, std::size_t column,
                                     const Extent& extent, const BeamConfig& config) {
  const auto binned = bin_attribute(dataset, stats, config.measure, column, extent, config.binning_options());
  std::vector<Feature> out;
  for (std::size_t b = 0; b < binned.result.bins.size(); ++b) {
    const auto& bin = binned.result.bins[b];
    out.push_back({Condition::interval(dataset.column(column).name(), bin.lower, bin.upper), binned.extents[b]});
  }
  return out;
}

std::vector<Feature> attribute_features(const Dataset& dataset, const GlobalTargetStats& stats, std::size_t column,
                                        const Extent& extent, const BeamConfig& config, std::size_t min_support) {
  auto features = dataset.column(column).kind() == ColumnKind::nominal
                      ? nominal_features(dataset, column, extent)
                      : binned_features(dataset, stats, column, extent, config);
  std::erase_if(features, [&](const Feature& f) { return f.extent.size() < min_support; });
  return features;
}

struct Task {
  std::size_t parent;
  std::size_t column;
};

// Expands every (parent, attribute) pair into scored refinements; results
// are concatenated in task order so the outcome does not depend on threads.
std::vector<ResultEntry> expand(const Dataset& dataset, const GlobalTargetStats& stats, const BeamConfig& config,
                                const std::vector<ResultEntry>& parents, std::size_t min_support) {
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < parents.size(); ++p) {
    for (const auto column : dataset.attributes()) {
      if (!parents[p].description.uses(dataset.column(column).name())) tasks.push_back({p, column});
    }
  }
  // Refinements are binned with the parent's cover in the role of the data.
  std::vector<GlobalTargetStats> local(parents.size());
  for (std::size_t p = 0; p < parents.size(); ++p) {
    if (!parents[p].description.empty()) {
      local[p] = restrict_stats(stats, dataset, parents[p].extent, fnv1a(parents[p].key));
    }
  }
  std::vector<std::vector<ResultEntry>> produced(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());
  const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    try {
      const auto& task = tasks[static_cast<std::size_t>(t)];
      const auto& parent = parents[task.parent];
      auto& out = produced[static_cast<std::size_t>(t)];
      const auto& binning_stats = parent.description.empty() ? stats : local[task.parent];
      for (auto& feature : attribute_features(dataset, binning_stats, task.column, parent.extent, config, min_support)) {
        // A refinement covering the whole parent is the parent itself.
        if (!parent.description.empty() && feature.extent.size() == parent.extent.size()) continue;
        ResultEntry entry;
        entry.description = refine(parent.description, std::move(feature.condition));
        entry.key = canonical_key(entry.description);
        entry.extent = std::move(feature.extent);
        entry.support = entry.extent.size();
        entry.quality = subgroup_quality(dataset, stats, config, entry.key, entry.extent);
        out.push_back(std::move(entry));
      }
    } catch (...) {
      failures[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<ResultEntry> all;
  for (auto& batch : produced) {
    for (auto& entry : batch) all.push_back(std::move(entry));
  }
  return all;
}

std::vector<ResultEntry> select_beam(std::vector<ResultEntry> candidates, std::size_t width) {
  std::sort(candidates.begin(), candidates.end(), ranks_before);
  std::vector<ResultEntry> beam;
  std::unordered_set<std::string> seen;
  for (auto& c : candidates) {
    if (beam.size() == width) break;
    if (seen.insert(c.key).second) beam.push_back(std::move(c));
  }
  return beam;
}

}  // namespace

void BeamConfig::validate() const {
  if (beam_width < 1) throw Error(ErrorCode::config, "beam width must be at least 1");
  if (max_depth < 1) throw Error(ErrorCode::config, "depth must be at least 1");
  if (top_k < 1) throw Error(ErrorCode::config, "top-k must be at least 1");
  if (beta < 1) throw Error(ErrorCode::config, "beta must be at least 1");
  if (min_support && *min_support < 1) throw Error(ErrorCode::config, "min support must be at least 1");
  if (min_bin_size < 1) throw Error(ErrorCode::config, "min bin size must be at least 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::config, "epsilon must lie in (0, 1]");
}

std::size_t BeamConfig::resolved_min_support(std::size_t m) const {
  if (min_support) return *min_support;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(m))));
}

BinningOptions BeamConfig::binning_options() const {
  return {binning_method, beta, epsilon, seed, min_bin_size};
}

bool ranks_before(const ResultEntry& a, const ResultEntry& b) noexcept {
  if (a.quality != b.quality) return a.quality > b.quality;
  if (a.support != b.support) return a.support < b.support;
  return a.key < b.key;
}

void ResultSet::offer(ResultEntry entry) {
  const auto same = std::find_if(entries_.begin(), entries_.end(), [&](const ResultEntry& e) { return e.key == entry.key; });
  if (same != entries_.end()) {
    if (!ranks_before(entry, *same)) return;
    entries_.erase(same);
  }
  if (entries_.size() == capacity_ && !ranks_before(entry, entries_.back())) return;
  entries_.insert(std::upper_bound(entries_.begin(), entries_.end(), entry, ranks_before), std::move(entry));
  if (entries_.size() > capacity_) entries_.pop_back();
}

std::vector<Feature> generate_features(const Dataset& dataset, const GlobalTargetStats& stats, const Extent& extent,
                                       const BeamConfig& config, const SubgroupDescription& exclude) {
  if (extent.empty()) throw Error(ErrorCode::empty_extent, "cannot generate features on an empty extent");
  const auto min_support = config.resolved_min_support(dataset.rows());
  std::vector<Feature> out;
  for (const auto column : dataset.attributes()) {
    if (exclude.uses(dataset.column(column).name())) continue;
    for (auto& f : attribute_features(dataset, stats, column, extent, config, min_support)) out.push_back(std::move(f));
  }
  return out;
}

double subgroup_quality(const Dataset& dataset, const GlobalTargetStats& stats, const BeamConfig& config,
                        const std::string& key, const Extent& extent) {
  if (config.measure.measure() != Measure::qr || config.epsilon >= 1.0) {
    return score(config.measure, extent, dataset, stats);
  }
  if (extent.empty()) throw Error(ErrorCode::empty_extent, "quality of an empty extent");
  const auto rows = extent.rows();
  const auto draws = static_cast<std::size_t>(std::ceil(config.epsilon * static_cast<double>(rows.size())));
  auto rng = detail::make_rng(config.seed, kCandidateStream, fnv1a(key));
  std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
  std::vector<std::uint32_t> sample(draws);
  for (auto& r : sample) r = rows[pick(rng)];
  return score_rows(config.measure, sample, dataset, stats);
}

ResultSet beam_search(const Dataset& dataset, const GlobalTargetStats& stats, const BeamConfig& config) {
  config.validate();
  if (!(stats.measure == config.measure)) {
    throw Error(ErrorCode::config, "global statistics were computed for a different measure");
  }
  const auto min_support = config.resolved_min_support(dataset.rows());
  ResultSet results(config.top_k);
  ResultEntry root;
  root.key = canonical_key(root.description);
  root.extent = Extent(dataset.rows(), true);
  root.support = dataset.rows();
  std::vector<ResultEntry> beam{root};
  for (std::size_t depth = 1; depth <= config.max_depth && !beam.empty(); ++depth) {
    auto candidates = expand(dataset, stats, config, beam, min_support);
    for (const auto& c : candidates) results.offer(c);
    beam = select_beam(std::move(candidates), config.beam_width);
  }
  return results;
}

ResultSet rescore(const ResultSet& results, const Dataset& dataset, const GlobalTargetStats& stats) {
  ResultSet out(results.capacity());
  for (auto entry : results.entries()) {
    entry.quality = score(stats.measure, entry.extent, dataset, stats);
    out.offer(std::move(entry));
  }
  return out;
}

double top_k_average(const ResultSet& results, std::size_t k) {
  if (results.empty()) throw Error(ErrorCode::empty_extent, "top-k average of an empty result set");
  if (k == 0) throw Error(ErrorCode::config, "k must be at least 1");
  const std::size_t n = std::min(k, results.size());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += results.entries()[i].quality;
  return total / static_cast<double>(n);
}

}  // namespace flexi
