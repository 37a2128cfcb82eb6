#include "flexi/target_stats.hpp"

#include <algorithm>
#include <cmath>

#include "flexi/error.hpp"
#include "flexi/kernels.hpp"
#include "flexi/measures.hpp"
#include "random.hpp"

namespace flexi {

std::size_t TupleHash::operator()(const std::vector<std::int32_t>& key) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto v : key) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<double> JointPmf::probability_of(const std::vector<std::int32_t>& tuple) const {
  const auto it = index.find(tuple);
  if (it == index.end()) return std::nullopt;
  return probability[it->second];
}

namespace {

std::vector<ColumnKind> target_kinds(const Dataset& dataset) {
  std::vector<ColumnKind> kinds;
  for (const auto t : dataset.targets()) kinds.push_back(dataset.column(t).kind());
  return kinds;
}

BinaryTargetStats binary_stats(const Dataset& dataset) {
  const auto& positive = dataset.positive();
  const std::size_t target = dataset.targets().front();
  if (!positive || positive->column != target) {
    throw Error(ErrorCode::inapplicable,
                "WRAcc needs a positive class on target '" + dataset.column(target).name() +
                    "' (declare it in the schema or binarize the target)");
  }
  BinaryTargetStats out{target, positive->code, 0};
  for (const auto code : dataset.column(target).codes()) out.m_plus += code == positive->code ? 1U : 0U;
  return out;
}

NumericTargetStats numeric_stats(const Dataset& dataset) {
  const std::size_t target = dataset.targets().front();
  const auto values = dataset.column(target).values();
  long double sum = 0.0L;
  for (const double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double squares = 0.0L;
  for (const double v : values) squares += (v - mean) * (v - mean);
  return {target, static_cast<double>(mean),
          static_cast<double>(std::sqrt(squares / static_cast<long double>(values.size())))};
}

JointPmf joint_pmf(const Dataset& dataset) {
  JointPmf pmf;
  pmf.columns = dataset.targets();
  const std::size_t m = dataset.rows();
  pmf.row_tuple.resize(m);
  std::vector<std::int32_t> key(pmf.columns.size());
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < key.size(); ++k) key[k] = dataset.column(pmf.columns[k]).codes()[r];
    auto [it, inserted] = pmf.index.try_emplace(key, static_cast<std::uint32_t>(pmf.count.size()));
    if (inserted) pmf.count.push_back(0);
    ++pmf.count[it->second];
    pmf.row_tuple[r] = it->second;
  }
  pmf.probability.resize(pmf.count.size());
  for (std::size_t t = 0; t < pmf.count.size(); ++t) {
    pmf.probability[t] = static_cast<double>(pmf.count[t]) / static_cast<double>(m);
  }
  return pmf;
}

QrStats qr_stats(const Dataset& dataset, QrSampling sampling) {
  if (!(sampling.epsilon > 0.0 && sampling.epsilon <= 1.0)) {
    throw Error(ErrorCode::config, "subsampling rate must lie in (0, 1]");
  }
  QrStats qr;
  qr.sampling = sampling;
  qr.columns = dataset.targets();
  qr.dims = qr.columns.size();
  const std::size_t m = dataset.rows();
  for (const auto c : qr.columns) {
    const auto& col = dataset.column(c);
    TargetBounds b;
    b.kind = col.kind();
    if (col.kind() == ColumnKind::numeric) {
      const auto [lo, hi] = std::minmax_element(col.values().begin(), col.values().end());
      b.lower = *lo;
      b.upper = *hi;
      b.ceiling = *hi;
    } else {
      b.domain_size = col.domain().size();
      b.lower = 0.0;
      b.upper = static_cast<double>(b.domain_size) - 1.0;
      b.ceiling = static_cast<double>(b.domain_size);
    }
    qr.bounds.push_back(b);
  }
  qr.points.resize(m * qr.dims);
  for (std::size_t k = 0; k < qr.dims; ++k) {
    const auto& col = dataset.column(qr.columns[k]);
    for (std::size_t r = 0; r < m; ++r) qr.points[r * qr.dims + k] = qr.bounds[k].ceiling - col.ordered_value(r);
  }

  if (sampling.epsilon < 1.0) {
    const auto draws = static_cast<std::size_t>(std::ceil(sampling.epsilon * static_cast<double>(m)));
    auto rng = detail::make_rng(sampling.seed, detail::kGlobalStream, 0);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(m - 1));
    qr.reference_rows.resize(draws);
    for (auto& r : qr.reference_rows) r = pick(rng);
  } else {
    qr.reference_rows.resize(m);
    for (std::size_t r = 0; r < m; ++r) qr.reference_rows[r] = static_cast<std::uint32_t>(r);
  }

  std::vector<std::uint32_t> all(m);
  for (std::size_t r = 0; r < m; ++r) all[r] = static_cast<std::uint32_t>(r);
  const auto everything = kernels::gather(qr.points, qr.dims, all);
  const auto reference = kernels::gather(qr.points, qr.dims, qr.reference_rows);
  qr.row_cross = kernels::row_cross_sums(everything, reference);
  double e = 0.0;
  for (const auto r : qr.reference_rows) e += qr.row_cross[r];
  qr.e_global = e;
  return qr;
}

}  // namespace

GlobalTargetStats compute_global_stats(const Dataset& dataset, const MeasureKind& measure, QrSampling sampling) {
  const auto kinds = target_kinds(dataset);
  if (!applicability(measure, kinds)) {
    std::string layout;
    for (const auto k : kinds) layout += (layout.empty() ? "" : ",") + std::string(to_string(k));
    throw Error(ErrorCode::inapplicable, "measure " + measure.name() + " does not apply to targets [" + layout + "]");
  }
  GlobalTargetStats stats;
  stats.measure = measure;
  stats.m = dataset.rows();
  switch (measure.measure()) {
    case Measure::wracc: stats.binary = binary_stats(dataset); break;
    case Measure::zscore: stats.numeric = numeric_stats(dataset); break;
    case Measure::kl:
    case Measure::hd: stats.joint = joint_pmf(dataset); break;
    case Measure::qr: stats.qr = qr_stats(dataset, sampling); break;
  }
  return stats;
}

GlobalTargetStats restrict_stats(const GlobalTargetStats& stats, const Dataset& dataset, const Extent& extent,
                                 std::uint64_t sample_index) {
  if (extent.empty()) throw Error(ErrorCode::empty_extent, "cannot restrict statistics to an empty extent");
  if (extent.universe() != dataset.rows()) throw Error(ErrorCode::invariant, "extent does not match the dataset");
  GlobalTargetStats out = stats;
  out.m = extent.size();
  const auto rows = extent.rows();
  if (stats.binary) {
    const auto codes = dataset.column(stats.binary->column).codes();
    std::size_t plus = 0;
    for (const auto r : rows) plus += codes[r] == stats.binary->positive_code ? 1U : 0U;
    out.binary->m_plus = plus;
  }
  if (stats.numeric) {
    const auto values = dataset.column(stats.numeric->column).values();
    long double sum = 0.0L;
    for (const auto r : rows) sum += values[r];
    const long double mean = sum / static_cast<long double>(rows.size());
    long double squares = 0.0L;
    for (const auto r : rows) squares += (values[r] - mean) * (values[r] - mean);
    out.numeric->mu0 = static_cast<double>(mean);
    const auto sigma = static_cast<double>(std::sqrt(squares / static_cast<long double>(rows.size())));
    if (sigma > 0.0) out.numeric->sigma0 = sigma;
  }
  if (stats.joint) {
    auto& joint = *out.joint;
    std::fill(joint.count.begin(), joint.count.end(), 0);
    for (const auto r : rows) ++joint.count[joint.row_tuple[r]];
    for (std::size_t t = 0; t < joint.count.size(); ++t) {
      joint.probability[t] = static_cast<double>(joint.count[t]) / static_cast<double>(rows.size());
    }
  }
  if (stats.qr) {
    auto& qr = *out.qr;
    if (qr.sampling.epsilon < 1.0) {
      const auto draws = static_cast<std::size_t>(std::ceil(qr.sampling.epsilon * static_cast<double>(rows.size())));
      auto rng = detail::make_rng(qr.sampling.seed, detail::kGlobalStream, sample_index);
      std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
      qr.reference_rows.resize(draws);
      for (auto& r : qr.reference_rows) r = rows[pick(rng)];
    } else {
      qr.reference_rows = rows;
    }
    const auto cover = kernels::gather(qr.points, qr.dims, rows);
    const auto reference = kernels::gather(qr.points, qr.dims, qr.reference_rows);
    const auto sums = kernels::row_cross_sums(cover, reference);
    std::fill(qr.row_cross.begin(), qr.row_cross.end(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) qr.row_cross[rows[i]] = sums[i];
    double e = 0.0;
    for (const auto r : qr.reference_rows) e += qr.row_cross[r];
    qr.e_global = e;
  }
  return out;
}

}  // namespace flexi
