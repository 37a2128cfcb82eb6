#include "flexi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flexi/error.hpp"
#include "flexi/kernels.hpp"

namespace flexi {

namespace {

bool categorical(ColumnKind k) { return k == ColumnKind::nominal || k == ColumnKind::ordinal; }

const BinaryTargetStats& need_binary(const GlobalTargetStats& stats) {
  if (!stats.binary) throw Error(ErrorCode::inapplicable, "statistics were not computed for WRAcc");
  return *stats.binary;
}

const NumericTargetStats& need_numeric(const GlobalTargetStats& stats) {
  if (!stats.numeric) throw Error(ErrorCode::inapplicable, "statistics were not computed for z-score");
  return *stats.numeric;
}

const JointPmf& need_joint(const GlobalTargetStats& stats) {
  if (!stats.joint) throw Error(ErrorCode::inapplicable, "statistics were not computed for kl/hd");
  return *stats.joint;
}

const QrStats& need_qr(const GlobalTargetStats& stats) {
  if (!stats.qr) throw Error(ErrorCode::inapplicable, "statistics were not computed for qr");
  return *stats.qr;
}

void require_rows(std::size_t s, const char* what) {
  if (s == 0) throw Error(ErrorCode::empty_extent, std::string(what) + " of an empty extent");
}

}  // namespace

bool applicability(const MeasureKind& kind, std::span<const ColumnKind> targets) noexcept {
  if (targets.empty()) return false;
  switch (kind.measure()) {
    case Measure::wracc: return targets.size() == 1 && categorical(targets[0]);
    case Measure::zscore: return targets.size() == 1 && targets[0] == ColumnKind::numeric;
    case Measure::kl:
    case Measure::hd: return std::all_of(targets.begin(), targets.end(), categorical);
    case Measure::qr:
      return std::none_of(targets.begin(), targets.end(), [](ColumnKind k) { return k == ColumnKind::nominal; });
  }
  return false;
}

bool applicability(const MeasureKind& kind, const Dataset& dataset) {
  std::vector<ColumnKind> kinds;
  for (const auto t : dataset.targets()) kinds.push_back(dataset.column(t).kind());
  return applicability(kind, kinds);
}

double binary_entropy(double fraction) noexcept {
  auto term = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log(x); };
  return term(fraction) + term(1.0 - fraction);
}

double wracc(std::size_t s, std::size_t s_plus, const GlobalTargetStats& stats) {
  require_rows(s, "WRAcc");
  const auto& binary = need_binary(stats);
  if (s_plus > s || s > stats.m) throw Error(ErrorCode::invariant, "WRAcc counts out of range");
  const double m = static_cast<double>(stats.m);
  const double sd = static_cast<double>(s);
  return sd / m * (static_cast<double>(s_plus) / sd - static_cast<double>(binary.m_plus) / m);
}

double zscore(std::size_t s, double mu, const GlobalTargetStats& stats) {
  require_rows(s, "z-score");
  const auto& numeric = need_numeric(stats);
  if (!(numeric.sigma0 > 0.0)) {
    throw Error(ErrorCode::degenerate_target, "z-score is undefined for a constant target");
  }
  return std::sqrt(static_cast<double>(s)) / numeric.sigma0 * (mu - numeric.mu0);
}

double kl_from_counts(std::span<const std::size_t> counts, std::span<const std::uint32_t> touched, std::size_t s,
                      const GlobalTargetStats& stats) {
  require_rows(s, "kl");
  const auto& joint = need_joint(stats);
  const double sd = static_cast<double>(s);
  double sum = 0.0;
  for (const auto t : touched) {
    const double ps = static_cast<double>(counts[t]) / sd;
    sum += ps * std::log(ps / joint.probability[t]);
  }
  return sd / static_cast<double>(stats.m) * sum;
}

double hd_from_counts(std::span<const std::size_t> counts, std::size_t s, const GlobalTargetStats& stats) {
  require_rows(s, "hd");
  const auto& joint = need_joint(stats);
  const double sd = static_cast<double>(s);
  double sum = 0.0;
  for (std::size_t t = 0; t < joint.tuples(); ++t) {
    const double diff = std::sqrt(static_cast<double>(counts[t]) / sd) - std::sqrt(joint.probability[t]);
    sum += diff * diff;
  }
  return binary_entropy(sd / static_cast<double>(stats.m)) * sum;
}

namespace {

struct TupleCounts {
  std::vector<std::size_t> counts;
  std::vector<std::uint32_t> touched;
  std::size_t s = 0;
};

template <typename Rows>
TupleCounts count_tuples(const Rows& rows, const JointPmf& joint) {
  TupleCounts out;
  out.counts.assign(joint.tuples(), 0);
  auto add = [&](std::uint32_t r) {
    const auto t = joint.row_tuple[r];
    if (out.counts[t]++ == 0) out.touched.push_back(t);
    ++out.s;
  };
  if constexpr (std::is_same_v<Rows, Extent>) {
    rows.for_each(add);
  } else {
    for (const auto r : rows) add(r);
  }
  return out;
}

}  // namespace

double kl(const Extent& extent, const GlobalTargetStats& stats) {
  const auto c = count_tuples(extent, need_joint(stats));
  return kl_from_counts(c.counts, c.touched, c.s, stats);
}

double hd(const Extent& extent, const GlobalTargetStats& stats) {
  const auto c = count_tuples(extent, need_joint(stats));
  return hd_from_counts(c.counts, c.s, stats);
}

QrTerms qr_terms(std::span<const std::uint32_t> rows, const GlobalTargetStats& stats) {
  require_rows(rows.size(), "qr terms");
  const auto& qr = need_qr(stats);
  QrTerms terms;
  terms.s = rows.size();
  double e2 = 0.0;
  for (const auto r : rows) e2 += qr.row_cross[r];
  terms.e2 = e2;
  // S equal to the reference: e1 is the same sum as e2, accumulated in the
  // same order as e_global, so the full-coverage score is exactly zero.
  const bool is_reference = std::equal(rows.begin(), rows.end(), qr.reference_rows.begin(), qr.reference_rows.end());
  terms.e1 = is_reference ? e2 : kernels::self_sum(kernels::gather(qr.points, qr.dims, rows));
  return terms;
}

QrTerms qr_terms(const Extent& extent, const GlobalTargetStats& stats) {
  const auto rows = extent.rows();
  return qr_terms(std::span<const std::uint32_t>(rows), stats);
}

double qr_score(const QrTerms& terms, const GlobalTargetStats& stats, QrWeight weight) {
  require_rows(terms.s, "qr");
  const auto& qr = need_qr(stats);
  const double s = static_cast<double>(terms.s);
  const double m = static_cast<double>(qr.reference_size());
  const double id = std::max(0.0, terms.e1 / (s * s) - 2.0 * terms.e2 / (s * m) + qr.e_global / (m * m));
  const double fraction = std::min(1.0, s / m);
  const double f = weight == QrWeight::linear ? fraction : binary_entropy(fraction);
  return f * id;
}

double int_term(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, const GlobalTargetStats& stats) {
  const auto& qr = need_qr(stats);
  if (a.empty() || b.empty()) return 0.0;
  return kernels::cross_sum(kernels::gather(qr.points, qr.dims, a), kernels::gather(qr.points, qr.dims, b));
}

double int_term(const Extent& a, const Extent& b, const GlobalTargetStats& stats) {
  if (a.intersects(b)) throw Error(ErrorCode::invariant, "int term needs disjoint extents");
  const auto ra = a.rows();
  const auto rb = b.rows();
  return int_term(std::span<const std::uint32_t>(ra), std::span<const std::uint32_t>(rb), stats);
}

QrTerms merge_terms(const QrTerms& a, const QrTerms& b, double int_ab) noexcept {
  return {a.e1 + b.e1 + 2.0 * int_ab, a.e2 + b.e2, a.s + b.s};
}

double score_rows(const MeasureKind& kind, std::span<const std::uint32_t> rows, const Dataset& dataset,
                  const GlobalTargetStats& stats) {
  require_rows(rows.size(), "quality");
  switch (kind.measure()) {
    case Measure::wracc: {
      const auto& binary = need_binary(stats);
      const auto codes = dataset.column(binary.column).codes();
      std::size_t plus = 0;
      for (const auto r : rows) plus += codes[r] == binary.positive_code ? 1U : 0U;
      return wracc(rows.size(), plus, stats);
    }
    case Measure::zscore: {
      const auto values = dataset.column(need_numeric(stats).column).values();
      long double sum = 0.0L;
      for (const auto r : rows) sum += values[r];
      return zscore(rows.size(), static_cast<double>(sum / static_cast<long double>(rows.size())), stats);
    }
    case Measure::kl: {
      const auto c = count_tuples(rows, need_joint(stats));
      return kl_from_counts(c.counts, c.touched, c.s, stats);
    }
    case Measure::hd: {
      const auto c = count_tuples(rows, need_joint(stats));
      return hd_from_counts(c.counts, c.s, stats);
    }
    case Measure::qr: return qr_score(qr_terms(rows, stats), stats, kind.qr_weight());
  }
  return 0.0;
}

double score(const MeasureKind& kind, const Extent& extent, const Dataset& dataset, const GlobalTargetStats& stats) {
  if (extent.empty()) throw Error(ErrorCode::empty_extent, "quality of an empty extent");
  const auto rows = extent.rows();
  return score_rows(kind, rows, dataset, stats);
}

}  // namespace flexi
