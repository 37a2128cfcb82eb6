#include <cmath>
#include <random>

#include "doctest.h"
#include "flexi/error.hpp"
#include "flexi/measures.hpp"
#include "oracles.hpp"

using namespace flexi;

namespace {

constexpr double kTight = 1e-12;

Extent extent_of(std::size_t m, std::vector<std::uint32_t> rows) { return Extent::from_rows(m, rows); }

Dataset binary_target(std::vector<std::int32_t> codes) {
  std::vector<double> a(codes.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i + 1);
  return oracle::make_dataset({oracle::numeric_attribute("A", a),
                               oracle::categorical("T", ColumnKind::nominal, ColumnRole::target, {"-", "+"},
                                                   std::move(codes))},
                              PositiveLabel{1, 1});
}

// Ordinal target a,a,b,b over dom {a,b}.
Dataset ordinal_aabb() {
  return oracle::make_dataset(
      {oracle::numeric_attribute("A", {1, 2, 3, 4}),
       oracle::categorical("T", ColumnKind::ordinal, ColumnRole::target, {"a", "b"}, {0, 0, 1, 1})});
}

bool near(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("applicability matrix") {
  const std::vector<ColumnKind> nominal{ColumnKind::nominal};
  const std::vector<ColumnKind> numeric{ColumnKind::numeric};
  const std::vector<ColumnKind> two_ordinal{ColumnKind::ordinal, ColumnKind::ordinal};
  const std::vector<ColumnKind> mixed{ColumnKind::numeric, ColumnKind::ordinal};
  CHECK(applicability(MeasureKind::wracc(), nominal));
  CHECK_FALSE(applicability(MeasureKind::qr(), nominal));
  CHECK(applicability(MeasureKind::kl(), two_ordinal));
  CHECK(applicability(MeasureKind::hd(), two_ordinal));
  CHECK(applicability(MeasureKind::qr(), mixed));
  CHECK_FALSE(applicability(MeasureKind::kl(), mixed));
  CHECK(applicability(MeasureKind::zscore(), numeric));
  CHECK_FALSE(applicability(MeasureKind::zscore(), two_ordinal));
  CHECK_FALSE(applicability(MeasureKind::wracc(), two_ordinal));
}

TEST_CASE("measure kind parsing") {
  CHECK(MeasureKind::parse("qr", "entropy") == MeasureKind::qr(QrWeight::entropy));
  CHECK(MeasureKind::parse("wracc") == MeasureKind::wracc());
  CHECK_THROWS_AS((void)MeasureKind::parse("chi2"), Error);
  CHECK_THROWS_AS((void)MeasureKind::parse("qr", "cubic"), Error);
  CHECK_FALSE(MeasureKind::kl().weight().has_value());
}

TEST_CASE("wracc examples") {
  GlobalTargetStats stats;
  stats.m = 10;
  stats.binary = BinaryTargetStats{0, 1, 4};
  CHECK(wracc(5, 4, stats) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(wracc(5, 0, stats) == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(wracc(10, 4, stats) == 0.0);
  CHECK_THROWS_AS((void)wracc(0, 0, stats), Error);
}

TEST_CASE("zscore examples") {
  const auto ds =
      oracle::make_dataset({oracle::numeric_attribute("A", {1, 2, 3, 4}), oracle::numeric_target("T", {1, 2, 3, 4})});
  const auto stats = compute_global_stats(ds, MeasureKind::zscore());
  const double expected = std::sqrt(2.0) / std::sqrt(1.25);
  CHECK(std::abs(score(MeasureKind::zscore(), extent_of(4, {2, 3}), ds, stats) - expected) <= kTight);
  CHECK(std::abs(score(MeasureKind::zscore(), extent_of(4, {0, 1}), ds, stats) + expected) <= kTight);
  CHECK(std::abs(expected - 1.264911) < 1e-6);
  CHECK(zscore(3, 2.5, stats) == 0.0);
}

TEST_CASE("constant numeric target is degenerate") {
  const auto ds =
      oracle::make_dataset({oracle::numeric_attribute("A", {1, 2, 3}), oracle::numeric_target("T", {2, 2, 2})});
  const auto stats = compute_global_stats(ds, MeasureKind::zscore());
  try {
    (void)score(MeasureKind::zscore(), extent_of(3, {0}), ds, stats);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_target);
  }
}

TEST_CASE("kl examples") {
  const auto ds = binary_target({1, 1, 0, 0});
  const auto stats = compute_global_stats(ds, MeasureKind::kl());
  CHECK(kl(Extent(4, true), stats) == 0.0);
  CHECK(std::abs(kl(extent_of(4, {0, 1}), stats) - 0.5 * std::log(2.0)) <= kTight);

  const auto skew = oracle::make_dataset(
      {oracle::numeric_attribute("A", {1, 2, 3, 4}),
       oracle::categorical("T", ColumnKind::nominal, ColumnRole::target, {"a", "b"}, {0, 0, 0, 1})});
  const auto skew_stats = compute_global_stats(skew, MeasureKind::kl());
  const double value = kl(extent_of(4, {0, 1}), skew_stats);
  CHECK(std::abs(value - 0.5 * std::log(1.0 / 0.75)) <= kTight);
  CHECK(std::abs(value - 0.143841) < 1e-6);
}

TEST_CASE("hd examples") {
  const auto ds = binary_target({1, 1, 0, 0});
  const auto stats = compute_global_stats(ds, MeasureKind::hd());
  CHECK(hd(Extent(4, true), stats) == 0.0);
  const double value = hd(extent_of(4, {0, 1}), stats);
  const double expected = std::log(2.0) * (std::pow(1.0 - std::sqrt(0.5), 2) + 0.5);
  CHECK(std::abs(value - expected) <= kTight);
  CHECK(std::abs(value - 0.406036) < 1e-6);
  // Same pmf as D at half the size.
  CHECK(std::abs(hd(extent_of(4, {0, 2}), stats)) <= kTight);
}

TEST_CASE("qr terms examples") {
  const auto ds = ordinal_aabb();
  const auto stats = compute_global_stats(ds, MeasureKind::qr());
  const auto s = qr_terms(extent_of(4, {0, 1}), stats);
  CHECK(s.e1 == 8.0);
  CHECK(s.e2 == 12.0);
  CHECK(s.s == 2);
  const auto all = qr_terms(Extent(4, true), stats);
  CHECK(all.e1 == stats.qr->e_global);
  CHECK(all.e2 == stats.qr->e_global);

  const auto numeric =
      oracle::make_dataset({oracle::numeric_attribute("A", {1, 2}), oracle::numeric_target("T", {1, 4})});
  const auto nstats = compute_global_stats(numeric, MeasureKind::qr());
  const auto one = qr_terms(extent_of(2, {0}), nstats);
  CHECK(one.e1 == 3.0);
  CHECK(one.e2 == 3.0);
}

TEST_CASE("qr score examples") {
  const auto ds = ordinal_aabb();
  const auto stats = compute_global_stats(ds, MeasureKind::qr());
  const auto terms = qr_terms(extent_of(4, {0, 1}), stats);
  CHECK(std::abs(qr_score(terms, stats, QrWeight::linear) - 0.125) <= kTight);
  CHECK(std::abs(qr_score(terms, stats, QrWeight::entropy) - std::log(2.0) * 0.25) <= kTight);
  CHECK(std::abs(qr_score(terms, stats, QrWeight::entropy) - 0.173287) < 1e-6);
  CHECK(qr_score(qr_terms(Extent(4, true), stats), stats, QrWeight::linear) == 0.0);
  CHECK(qr_score(qr_terms(Extent(4, true), stats), stats, QrWeight::entropy) == 0.0);
  CHECK(std::abs(score(MeasureKind::qr(), extent_of(4, {0, 1}), ds, stats) - 0.125) <= kTight);
}

TEST_CASE("int term and merge examples") {
  const auto ds = ordinal_aabb();
  const auto stats = compute_global_stats(ds, MeasureKind::qr());
  const auto s = extent_of(4, {0, 1});
  const auto r = extent_of(4, {2, 3});
  CHECK(int_term(s, r, stats) == 4.0);
  CHECK(int_term(r, s, stats) == 4.0);
  CHECK(int_term(s, Extent(4), stats) == 0.0);
  CHECK_THROWS_AS((void)int_term(s, extent_of(4, {1, 2}), stats), Error);

  const auto merged = merge_terms(qr_terms(s, stats), qr_terms(r, stats), int_term(s, r, stats));
  CHECK(merged.e1 == 20.0);
  CHECK(merged.e2 == 20.0);
  CHECK(merged.s == 4);

  const auto a = qr_terms(s, stats);
  const auto same = merge_terms(a, QrTerms{}, 0.0);
  CHECK(same.e1 == a.e1);
  CHECK(same.e2 == a.e2);
  CHECK(same.s == a.s);
  const auto ab = merge_terms(a, qr_terms(r, stats), 4.0);
  const auto ba = merge_terms(qr_terms(r, stats), a, 4.0);
  CHECK(ab.e1 == ba.e1);
  CHECK(ab.e2 == ba.e2);
}

TEST_CASE("full coverage scores zero for every measure") {
  CHECK(score(MeasureKind::wracc(), Extent(4, true), binary_target({1, 0, 1, 0}),
              compute_global_stats(binary_target({1, 0, 1, 0}), MeasureKind::wracc())) == 0.0);
  std::mt19937_64 rng(21);
  for (const auto measure : {Measure::wracc, Measure::zscore, Measure::kl, Measure::hd, Measure::qr}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto ds = oracle::random_dataset(rng, measure, 40, 2);
      for (const auto weight : {QrWeight::linear, QrWeight::entropy}) {
        const auto kind = measure == Measure::qr ? MeasureKind::qr(weight) : MeasureKind(measure);
        const auto stats = compute_global_stats(ds, kind);
        const double value = score(kind, Extent(ds.rows(), true), ds, stats);
        if (measure == Measure::zscore) {
          CHECK(std::abs(value) <= 1e-12);
        } else {
          CHECK(value == 0.0);
        }
      }
    }
  }
}

TEST_CASE("measures agree with the naive definitions") {
  std::mt19937_64 rng(22);
  for (const auto measure : {Measure::wracc, Measure::zscore, Measure::kl, Measure::hd, Measure::qr}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ds = oracle::random_dataset(rng, measure, 30 + trial, 1 + trial % 3);
      const auto kind = measure == Measure::qr ? MeasureKind::qr(trial % 2 ? QrWeight::entropy : QrWeight::linear)
                                               : MeasureKind(measure);
      const auto stats = compute_global_stats(ds, kind);
      std::bernoulli_distribution keep(0.4);
      oracle::Rows rows;
      for (std::uint32_t r = 0; r < ds.rows(); ++r) {
        if (keep(rng)) rows.push_back(r);
      }
      if (rows.empty()) rows.push_back(0);
      const double got = score(kind, Extent::from_rows(ds.rows(), rows), ds, stats);
      const double want = oracle::score(kind, ds, rows);
      CHECK(near(got, want, 1e-9));
      if (measure == Measure::kl || measure == Measure::hd || measure == Measure::qr) CHECK(got >= 0.0);
    }
  }
}

TEST_CASE("wracc sign follows the positive share") {
  const auto ds = binary_target({1, 1, 0, 0, 1, 0});
  const auto stats = compute_global_stats(ds, MeasureKind::wracc());
  CHECK(score(MeasureKind::wracc(), extent_of(6, {0, 1}), ds, stats) > 0.0);
  CHECK(score(MeasureKind::wracc(), extent_of(6, {2, 3}), ds, stats) < 0.0);
  CHECK(score(MeasureKind::wracc(), extent_of(6, {0, 2}), ds, stats) == 0.0);
}

TEST_CASE("measure without its statistics") {
  const auto ds = binary_target({1, 0});
  const auto stats = compute_global_stats(ds, MeasureKind::wracc());
  CHECK_THROWS_AS((void)score(MeasureKind::kl(), Extent(2, true), ds, stats), Error);
  CHECK_THROWS_AS((void)score(MeasureKind::wracc(), Extent(2), ds, stats), Error);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::abs(binary_entropy(0.5) - std::log(2.0)) <= kTight);
}
