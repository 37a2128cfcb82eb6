#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace oracle {

using flexi::Column;
using flexi::ColumnKind;
using flexi::ColumnRole;
using flexi::Dataset;

flexi::Dataset make_dataset(std::vector<Column> columns, std::optional<flexi::PositiveLabel> positive) {
  return Dataset(std::move(columns), positive);
}

Column numeric_attribute(const std::string& name, std::vector<double> values) {
  return Column::numeric(name, ColumnRole::attribute, std::move(values));
}

Column numeric_target(const std::string& name, std::vector<double> values) {
  return Column::numeric(name, ColumnRole::target, std::move(values));
}

Column categorical(const std::string& name, ColumnKind kind, ColumnRole role, std::vector<std::string> domain,
                   std::vector<std::int32_t> codes) {
  return Column::categorical(name, kind, role, std::move(domain), std::move(codes));
}

namespace {

double entropy(double x) {
  auto t = [](double v) { return v <= 0.0 ? 0.0 : -v * std::log(v); };
  return t(x) + t(1.0 - x);
}

std::vector<std::int32_t> tuple_of(const Dataset& ds, std::uint32_t row) {
  std::vector<std::int32_t> key;
  for (const auto t : ds.targets()) key.push_back(ds.column(t).codes()[row]);
  return key;
}

// Target value used by h: the raw number, or the rank for ordinal targets.
double target_value(const Column& c, std::uint32_t row) {
  return c.kind() == ColumnKind::numeric ? c.values()[row] : static_cast<double>(c.codes()[row]);
}

double h(const Dataset& ds, std::uint32_t a, std::uint32_t b) {
  double prod = 1.0;
  for (const auto t : ds.targets()) {
    const auto& c = ds.column(t);
    const double hi = std::max(target_value(c, a), target_value(c, b));
    if (c.kind() == ColumnKind::numeric) {
      const double top = *std::max_element(c.values().begin(), c.values().end());
      prod *= top - hi;
    } else {
      // Number of domain ranks t with t >= hi.
      double count = 0.0;
      for (std::size_t r = 0; r < c.domain().size(); ++r) count += static_cast<double>(r) >= hi ? 1.0 : 0.0;
      prod *= count;
    }
  }
  return prod;
}

Rows all_rows(const Dataset& ds) {
  Rows r(ds.rows());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::uint32_t>(i);
  return r;
}

}  // namespace

double wracc(const Dataset& ds, const Rows& rows) {
  const auto& pos = ds.positive().value();
  const auto codes = ds.column(pos.column).codes();
  double m_plus = 0.0;
  for (const auto c : codes) m_plus += c == pos.code ? 1.0 : 0.0;
  double s_plus = 0.0;
  for (const auto r : rows) s_plus += codes[r] == pos.code ? 1.0 : 0.0;
  const double m = static_cast<double>(ds.rows());
  const double s = static_cast<double>(rows.size());
  return s / m * (s_plus / s - m_plus / m);
}

double zscore(const Dataset& ds, const Rows& rows) {
  const auto values = ds.column(ds.targets().front()).values();
  double mu0 = 0.0;
  for (const double v : values) mu0 += v;
  mu0 /= static_cast<double>(values.size());
  double var = 0.0;
  for (const double v : values) var += (v - mu0) * (v - mu0);
  const double sigma0 = std::sqrt(var / static_cast<double>(values.size()));
  double mu = 0.0;
  for (const auto r : rows) mu += values[r];
  mu /= static_cast<double>(rows.size());
  return std::sqrt(static_cast<double>(rows.size())) / sigma0 * (mu - mu0);
}

double kl(const Dataset& ds, const Rows& rows) {
  std::map<std::vector<std::int32_t>, double> p;
  std::map<std::vector<std::int32_t>, double> ps;
  for (std::uint32_t r = 0; r < ds.rows(); ++r) p[tuple_of(ds, r)] += 1.0;
  for (const auto r : rows) ps[tuple_of(ds, r)] += 1.0;
  const double m = static_cast<double>(ds.rows());
  const double s = static_cast<double>(rows.size());
  double sum = 0.0;
  for (const auto& [key, count] : ps) sum += count / s * std::log((count / s) / (p[key] / m));
  return s / m * sum;
}

double hd(const Dataset& ds, const Rows& rows) {
  std::map<std::vector<std::int32_t>, double> p;
  std::map<std::vector<std::int32_t>, double> ps;
  for (std::uint32_t r = 0; r < ds.rows(); ++r) p[tuple_of(ds, r)] += 1.0;
  for (const auto r : rows) ps[tuple_of(ds, r)] += 1.0;
  const double m = static_cast<double>(ds.rows());
  const double s = static_cast<double>(rows.size());
  double sum = 0.0;
  for (const auto& [key, count] : p) {
    const auto it = ps.find(key);
    const double d = std::sqrt(it == ps.end() ? 0.0 : it->second / s) - std::sqrt(count / m);
    sum += d * d;
  }
  return entropy(s / m) * sum;
}

double pair_sum(const Dataset& ds, const Rows& a, const Rows& b) {
  double total = 0.0;
  for (const auto i : a) {
    for (const auto j : b) total += h(ds, i, j);
  }
  return total;
}

double qr_id(const Dataset& ds, const Rows& rows) {
  const auto everything = all_rows(ds);
  const double m = static_cast<double>(ds.rows());
  const double s = static_cast<double>(rows.size());
  return pair_sum(ds, rows, rows) / (s * s) - 2.0 * pair_sum(ds, rows, everything) / (s * m) +
         pair_sum(ds, everything, everything) / (m * m);
}

double qr(const Dataset& ds, const Rows& rows, flexi::QrWeight weight) {
  const double fraction = static_cast<double>(rows.size()) / static_cast<double>(ds.rows());
  const double f = weight == flexi::QrWeight::linear ? fraction : entropy(fraction);
  return f * std::max(0.0, qr_id(ds, rows));
}

double score(const flexi::MeasureKind& kind, const Dataset& ds, const Rows& rows) {
  switch (kind.measure()) {
    case flexi::Measure::wracc: return wracc(ds, rows);
    case flexi::Measure::zscore: return zscore(ds, rows);
    case flexi::Measure::kl: return kl(ds, rows);
    case flexi::Measure::hd: return hd(ds, rows);
    case flexi::Measure::qr: return qr(ds, rows, kind.qr_weight());
  }
  throw std::logic_error("unknown measure");
}

double cdf_id(const Dataset& ds, const Rows& rows) {
  if (ds.rows() > 64) throw std::invalid_argument("cdf_id handles at most 64 rows");
  struct Cell {
    std::uint64_t below;  // rows with value <= t
    double weight;
  };
  std::vector<std::vector<Cell>> axes;
  for (const auto t : ds.targets()) {
    const auto& c = ds.column(t);
    std::vector<Cell> cells;
    if (c.kind() == ColumnKind::numeric) {
      std::vector<double> grid(c.values().begin(), c.values().end());
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
      for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        std::uint64_t mask = 0;
        for (std::uint32_t r = 0; r < ds.rows(); ++r) {
          if (c.values()[r] <= grid[g]) mask |= std::uint64_t{1} << r;
        }
        cells.push_back({mask, grid[g + 1] - grid[g]});
      }
    } else {
      for (std::size_t rank = 0; rank < c.domain().size(); ++rank) {
        std::uint64_t mask = 0;
        for (std::uint32_t r = 0; r < ds.rows(); ++r) {
          if (static_cast<std::size_t>(c.codes()[r]) <= rank) mask |= std::uint64_t{1} << r;
        }
        cells.push_back({mask, 1.0});
      }
    }
    axes.push_back(std::move(cells));
  }
  std::uint64_t subgroup = 0;
  for (const auto r : rows) subgroup |= std::uint64_t{1} << r;
  if (static_cast<std::size_t>(std::popcount(subgroup)) != rows.size()) {
    throw std::invalid_argument("cdf_id needs distinct rows");
  }
  const double m = static_cast<double>(ds.rows());
  const double s = static_cast<double>(rows.size());
  const std::uint64_t full = ds.rows() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ds.rows()) - 1;

  double total = 0.0;
  std::function<void(std::size_t, std::uint64_t, double)> walk = [&](std::size_t k, std::uint64_t mask, double w) {
    if (k == axes.size()) {
      const double gap = std::popcount(mask & subgroup) / s - std::popcount(mask) / m;
      total += w * gap * gap;
      return;
    }
    for (const auto& cell : axes[k]) walk(k + 1, mask & cell.below, w * cell.weight);
  };
  walk(0, full, 1.0);
  return total;
}

BruteForceBinning brute_force_binning(const std::vector<Rows>& bins,
                                      const std::function<double(const Rows&)>& quality) {
  const std::size_t beta = bins.size();
  BruteForceBinning best{-INFINITY, -INFINITY};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (beta - 1)); ++mask) {
    // Bit b set: a cut after initial bin b.
    double total = 0.0;
    std::size_t count = 0;
    Rows current;
    for (std::size_t b = 0; b < beta; ++b) {
      current.insert(current.end(), bins[b].begin(), bins[b].end());
      if (b + 1 == beta || ((mask >> b) & 1U) != 0) {
        total += quality(current);
        ++count;
        current.clear();
      }
    }
    best.best_total = std::max(best.best_total, total);
    best.best_average = std::max(best.best_average, total / static_cast<double>(count));
  }
  return best;
}

Dataset random_dataset(std::mt19937_64& rng, flexi::Measure measure, std::size_t m, std::size_t dims,
                       std::size_t attributes) {
  std::vector<Column> columns;
  std::uniform_int_distribution<int> spread_pick(0, 2);
  for (std::size_t a = 0; a < attributes; ++a) {
    const int spreads[] = {3, static_cast<int>(std::max<std::size_t>(2, m / 3)), static_cast<int>(m)};
    std::uniform_int_distribution<int> value(0, spreads[spread_pick(rng)]);
    std::vector<double> values(m);
    for (auto& v : values) v = value(rng);
    columns.push_back(numeric_attribute("a" + std::to_string(a), std::move(values)));
  }
  std::optional<flexi::PositiveLabel> positive;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto categorical_target = [&](const std::string& name, ColumnKind kind, std::size_t domain_size) {
    std::vector<std::string> domain;
    for (std::size_t v = 0; v < domain_size; ++v) domain.push_back("v" + std::to_string(v));
    std::uniform_int_distribution<std::int32_t> code(0, static_cast<std::int32_t>(domain_size) - 1);
    std::vector<std::int32_t> codes(m);
    for (auto& c : codes) c = code(rng);
    return categorical(name, kind, ColumnRole::target, std::move(domain), std::move(codes));
  };
  switch (measure) {
    case flexi::Measure::wracc: {
      const double p = 0.2 + 0.6 * unit(rng);
      std::vector<std::int32_t> codes(m);
      for (auto& c : codes) c = unit(rng) < p ? 1 : 0;
      columns.push_back(categorical("t", ColumnKind::nominal, ColumnRole::target, {"neg", "pos"}, std::move(codes)));
      positive = flexi::PositiveLabel{columns.size() - 1, 1};
      break;
    }
    case flexi::Measure::zscore: {
      std::normal_distribution<double> noise(5.0, 2.0);
      std::vector<double> values(m);
      for (auto& v : values) v = std::round(noise(rng) * 100.0) / 100.0;
      values[0] += 1.0;  // never constant
      columns.push_back(numeric_target("t", std::move(values)));
      break;
    }
    case flexi::Measure::kl:
    case flexi::Measure::hd: {
      std::uniform_int_distribution<std::size_t> size(2, 4);
      for (std::size_t k = 0; k < dims; ++k) {
        const auto kind = unit(rng) < 0.5 ? ColumnKind::nominal : ColumnKind::ordinal;
        columns.push_back(categorical_target("t" + std::to_string(k), kind, size(rng)));
      }
      break;
    }
    case flexi::Measure::qr: {
      std::uniform_int_distribution<std::size_t> size(2, 5);
      for (std::size_t k = 0; k < dims; ++k) {
        if (unit(rng) < 0.5) {
          std::vector<double> values(m);
          for (auto& v : values) v = std::round(unit(rng) * 40.0) / 4.0;
          columns.push_back(numeric_target("t" + std::to_string(k), std::move(values)));
        } else {
          columns.push_back(categorical_target("t" + std::to_string(k), ColumnKind::ordinal, size(rng)));
        }
      }
      break;
    }
  }
  return Dataset(std::move(columns), positive);
}

}  // namespace oracle
