#include <cmath>
#include <random>

#include "doctest.h"
#include "flexi/error.hpp"
#include "flexi/measures.hpp"
#include "flexi/search.hpp"
#include "oracles.hpp"

using namespace flexi;

namespace {

Dataset four_rows() {
  return oracle::make_dataset(
      {oracle::numeric_attribute("A", {1, 2, 3, 4}),
       oracle::categorical("T", ColumnKind::nominal, ColumnRole::target, {"-", "+"}, {1, 1, 0, 0})},
      PositiveLabel{1, 1});
}

ResultEntry entry(std::string key, double quality, std::size_t support) {
  ResultEntry e;
  e.key = std::move(key);
  e.quality = quality;
  e.support = support;
  return e;
}

}  // namespace

TEST_CASE("top_k_average examples") {
  ResultSet one(50);
  one.offer(entry("a", 0.2, 1));
  CHECK(top_k_average(one, 50) == 0.2);
  ResultSet two(50);
  two.offer(entry("a", 0.1, 1));
  two.offer(entry("b", 0.3, 1));
  CHECK(top_k_average(two, 2) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(top_k_average(two, 1) == 0.3);
  CHECK_THROWS_AS((void)top_k_average(ResultSet(5), 1), Error);
  CHECK_THROWS_AS((void)top_k_average(two, 0), Error);
}

TEST_CASE("result set ordering, dedup and capacity") {
  ResultSet set(3);
  set.offer(entry("x", 0.5, 10));
  set.offer(entry("y", 0.5, 4));
  set.offer(entry("z", 0.9, 7));
  set.offer(entry("w", 0.1, 1));
  REQUIRE(set.size() == 3);
  CHECK(set.entries()[0].key == "z");
  CHECK(set.entries()[1].key == "y");
  CHECK(set.entries()[2].key == "x");
  set.offer(entry("x", 0.95, 10));
  CHECK(set.size() == 3);
  CHECK(set.entries()[0].key == "x");
  set.offer(entry("x", 0.2, 10));
  CHECK(set.entries()[0].quality == 0.95);
}

TEST_CASE("feature generation") {
  const auto nominal = oracle::make_dataset(
      {oracle::categorical("A", ColumnKind::nominal, ColumnRole::attribute, {"x", "y"}, {0, 1, 0, 1}),
       oracle::categorical("T", ColumnKind::nominal, ColumnRole::target, {"-", "+"}, {1, 1, 0, 0})},
      PositiveLabel{1, 1});
  const auto stats = compute_global_stats(nominal, MeasureKind::wracc());
  BeamConfig config;
  const auto features = generate_features(nominal, stats, Extent(4, true), config);
  REQUIRE(features.size() == 2);
  CHECK(features[0].condition == Condition::equals("A", "x"));
  CHECK(features[1].condition == Condition::equals("A", "y"));

  const auto flat = oracle::make_dataset(
      {oracle::numeric_attribute("A", {3, 3, 3, 3}),
       oracle::categorical("T", ColumnKind::nominal, ColumnRole::target, {"-", "+"}, {1, 1, 0, 0})},
      PositiveLabel{1, 1});
  const auto flat_features =
      generate_features(flat, compute_global_stats(flat, MeasureKind::wracc()), Extent(4, true), config);
  REQUIRE(flat_features.size() == 1);
  CHECK(flat_features[0].condition == Condition::interval("A", -INFINITY, INFINITY));
  CHECK(flat_features[0].extent.size() == 4);

  config.min_support = 5;
  CHECK(generate_features(nominal, stats, Extent(4, true), config).empty());
}

TEST_CASE("depth one on the four-row instance") {
  const auto ds = four_rows();
  const auto stats = compute_global_stats(ds, MeasureKind::wracc());
  BeamConfig config;
  config.beta = 2;
  config.max_depth = 1;
  const auto results = beam_search(ds, stats, config);
  REQUIRE_FALSE(results.empty());
  const auto& best = results.entries().front();
  CHECK(to_string(best.description) == "A in (-inf, 2]");
  CHECK(best.quality == 0.25);
  CHECK(best.support == 2);
}

TEST_CASE("config validation") {
  const auto ds = four_rows();
  const auto stats = compute_global_stats(ds, MeasureKind::wracc());
  BeamConfig config;
  config.beam_width = 0;
  CHECK_THROWS_AS((void)beam_search(ds, stats, config), Error);
  config = {};
  config.epsilon = 0.0;
  CHECK_THROWS_AS((void)beam_search(ds, stats, config), Error);
  config = {};
  config.measure = MeasureKind::kl();
  CHECK_THROWS_AS((void)beam_search(ds, stats, config), Error);
  CHECK(BeamConfig{}.resolved_min_support(250) == 3);
  CHECK(BeamConfig{}.resolved_min_support(50) == 1);
}

TEST_CASE("reported qualities are consistent with the descriptions") {
  std::mt19937_64 rng(41);
  for (const auto measure : {Measure::wracc, Measure::zscore, Measure::kl, Measure::hd, Measure::qr}) {
    const auto ds = oracle::random_dataset(rng, measure, 150, 2, 3);
    const auto kind = measure == Measure::qr ? MeasureKind::qr() : MeasureKind(measure);
    const auto stats = compute_global_stats(ds, kind);
    BeamConfig config;
    config.measure = kind;
    config.beta = 5;
    config.max_depth = 3;
    config.beam_width = 4;
    const auto results = beam_search(ds, stats, config);
    REQUIRE_FALSE(results.empty());
    for (const auto& e : results.entries()) {
      const auto extent = evaluate(e.description, ds);
      CHECK(extent == e.extent);
      CHECK(e.support == extent.size());
      CHECK(e.key == canonical_key(e.description));
      const double direct = score(kind, extent, ds, stats);
      CHECK(std::abs(e.quality - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
      // Anti-monotone support along the refinement chain.
      for (std::size_t drop = 0; drop < e.description.size() && e.description.size() > 1; ++drop) {
        auto conditions = e.description.conditions();
        conditions.erase(conditions.begin() + static_cast<std::ptrdiff_t>(drop));
        CHECK(evaluate(SubgroupDescription(conditions), ds).size() >= e.support);
      }
    }
  }
}

TEST_CASE("subsampled qualities are reproducible") {
  std::mt19937_64 rng(42);
  const auto ds = oracle::random_dataset(rng, Measure::qr, 300, 2, 2);
  BeamConfig config;
  config.measure = MeasureKind::qr();
  config.epsilon = 0.3;
  config.seed = 17;
  config.beta = 5;
  const auto stats = compute_global_stats(ds, config.measure, {config.epsilon, config.seed});
  const auto a = beam_search(ds, stats, config);
  const auto b = beam_search(ds, stats, config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries()[i].key == b.entries()[i].key);
    CHECK(a.entries()[i].quality == b.entries()[i].quality);
    CHECK(subgroup_quality(ds, stats, config, a.entries()[i].key, a.entries()[i].extent) == a.entries()[i].quality);
  }
  const auto exact_stats = compute_global_stats(ds, config.measure);
  const auto exact = rescore(a, ds, exact_stats);
  for (const auto& e : exact.entries()) CHECK(e.quality == score(config.measure, e.extent, ds, exact_stats));
}

TEST_CASE("wide beam dominates beam width one") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = oracle::random_dataset(rng, Measure::wracc, 80, 1, 3);
    const auto stats = compute_global_stats(ds, MeasureKind::wracc());
    BeamConfig narrow;
    narrow.beta = 4;
    narrow.max_depth = 3;
    narrow.beam_width = 1;
    BeamConfig wide = narrow;
    wide.beam_width = 10000;
    CHECK(beam_search(ds, stats, wide).entries().front().quality >=
          beam_search(ds, stats, narrow).entries().front().quality);
  }
}

TEST_CASE("restricted statistics") {
  const auto ds = four_rows();
  const auto stats = compute_global_stats(ds, MeasureKind::wracc());
  const auto local = restrict_stats(stats, ds, Extent::from_rows(4, std::vector<std::uint32_t>{0, 1, 2}));
  CHECK(local.m == 3);
  CHECK(local.binary->m_plus == 2);
  CHECK_THROWS_AS((void)restrict_stats(stats, ds, Extent(4), 0), Error);

  std::mt19937_64 rng(44);
  const auto q = oracle::random_dataset(rng, Measure::qr, 40, 2);
  const auto qstats = compute_global_stats(q, MeasureKind::qr());
  std::vector<std::uint32_t> half;
  for (std::uint32_t r = 0; r < 40; r += 2) half.push_back(r);
  const auto qlocal = restrict_stats(qstats, q, Extent::from_rows(40, half));
  CHECK(qlocal.qr->reference_size() == half.size());
  // The local reference equals the global one when the extent is all of D.
  const auto full = restrict_stats(qstats, q, Extent(40, true));
  CHECK(full.qr->e_global == qstats.qr->e_global);
  CHECK(full.qr->row_cross == qstats.qr->row_cross);
  // The local self term is the pair sum over the extent itself.
  double expected = 0.0;
  for (const auto i : half) {
    for (const auto j : half) {
      double w = 1.0;
      for (std::size_t k = 0; k < qstats.qr->dims; ++k) w *= std::min(qstats.qr->point(i)[k], qstats.qr->point(j)[k]);
      expected += w;
    }
  }
  CHECK(std::abs(qlocal.qr->e_global - expected) <= 1e-9 * expected);
}
