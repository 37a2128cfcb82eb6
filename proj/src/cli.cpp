#include "flexi/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "flexi/error.hpp"
#include "flexi/measures.hpp"
#include "flexi/target_stats.hpp"

namespace flexi::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string six(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

Json number_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

class Sink {
 public:
  Sink(const RunConfig& config, std::ostream& fallback) : stream_(&fallback) {
    if (config.output) {
      file_.open(*config.output, std::ios::binary);
      if (!file_) throw Error(ErrorCode::io, "cannot write '" + config.output->string() + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct Loaded {
  Dataset dataset;
  MeasureKind measure;
  GlobalTargetStats stats;
};

Loaded load(const RunConfig& config, std::ostream& err) {
  const auto measure = MeasureKind::parse(config.measure, config.f_variant);
  const auto schema = Schema::load(config.schema);
  auto loaded = load_csv(config.data, schema, config.missing_policy());
  if (loaded.dropped_rows > 0) err << "warning: dropped " << loaded.dropped_rows << " rows with missing values\n";
  if (!applicability(measure, loaded.dataset)) {
    throw Error(ErrorCode::inapplicable, "measure " + measure.name() + " does not apply to the declared targets");
  }
  auto stats = compute_global_stats(loaded.dataset, measure, {config.epsilon, config.seed});
  return {std::move(loaded.dataset), measure, std::move(stats)};
}

struct Discovery {
  ResultSet results{1};
  std::optional<double> search_average;  // subsampled average before exact rescoring
  double seconds = 0.0;
};

Discovery discover(const Loaded& in, const BeamConfig& beam) {
  const auto start = Clock::now();
  Discovery out;
  out.results = beam_search(in.dataset, in.stats, beam);
  if (in.measure.measure() == Measure::qr && beam.epsilon < 1.0 && in.dataset.rows() <= kExactRescoreLimit &&
      !out.results.empty()) {
    out.search_average = top_k_average(out.results, beam.top_k);
    const auto exact = compute_global_stats(in.dataset, in.measure);
    out.results = rescore(out.results, in.dataset, exact);
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

void report_runtime(const RunConfig& config, double seconds, std::ostream& report, std::ostream& err) {
  (config.timing ? report : err) << "# summary runtime_seconds=" << six(seconds) << '\n';
}

std::string interval_text(const Condition& condition, const Dataset& dataset) {
  const auto text = to_string(condition, dataset);
  const auto prefix = condition.attribute() + " in ";
  return text.substr(prefix.size());
}

}  // namespace

BeamConfig RunConfig::beam_config() const {
  BeamConfig beam;
  beam.beam_width = beam_width;
  beam.max_depth = max_depth;
  beam.top_k = top_k;
  beam.measure = MeasureKind::parse(measure, f_variant);
  beam.binning_method = parse_binning_method(method);
  beam.beta = beta;
  beam.epsilon = epsilon;
  beam.min_support = min_support;
  beam.seed = seed;
  beam.validate();
  return beam;
}

MissingPolicy RunConfig::missing_policy() const {
  if (on_missing == "error") return MissingPolicy::error;
  if (on_missing == "drop") return MissingPolicy::drop_row;
  throw Error(ErrorCode::config, "unknown missing-value policy '" + on_missing + "' (error|drop)");
}

int cmd_discover(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto beam = config.beam_config();
  const auto in = load(config, err);
  const auto found = discover(in, beam);
  Sink sink(config, out);
  auto& os = sink.get();
  const auto& entries = found.results.entries();
  const double average = found.results.empty() ? std::nan("") : top_k_average(found.results, beam.top_k);

  if (config.format == OutputFormat::json) {
    Json doc;
    doc["command"] = "discover";
    doc["measure"] = in.measure.name();
    doc["method"] = config.method;
    doc["exact_rescored"] = found.search_average.has_value();
    Json rows = Json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      rows.push_back({{"rank", i + 1},
                      {"description", to_string(entries[i].description, in.dataset)},
                      {"support", entries[i].support},
                      {"quality", entries[i].quality}});
    }
    doc["results"] = rows;
    Json summary;
    summary["k"] = beam.top_k;
    summary["subgroups"] = entries.size();
    summary["top_k_average"] = number_or_null(average);
    if (found.search_average) summary["search_top_k_average"] = *found.search_average;
    if (config.timing) summary["runtime_seconds"] = found.seconds;
    doc["summary"] = summary;
    os << doc.dump(2) << '\n';
    if (!config.timing) err << "# summary runtime_seconds=" << six(found.seconds) << '\n';
  } else {
    os << "rank\tdescription\tsupport\tquality\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      os << i + 1 << '\t' << to_string(entries[i].description, in.dataset) << '\t' << entries[i].support << '\t'
         << six(entries[i].quality) << '\n';
    }
    os << "# summary top_k_average=" << six(average) << " k=" << beam.top_k
       << " subgroups=" << entries.size() << '\n';
    if (found.search_average) {
      os << "# summary search_top_k_average=" << six(*found.search_average) << " (qualities above are exact)\n";
    }
    report_runtime(config, found.seconds, os, err);
  }
  if (entries.empty()) err << "warning: no subgroup reached the minimum support\n";
  return 0;
}

int cmd_bin(const RunConfig& config, const std::string& attribute, std::ostream& out, std::ostream& err) {
  const auto beam = config.beam_config();
  const auto start = Clock::now();
  const auto in = load(config, err);
  const auto column = in.dataset.index_of(attribute);
  const auto& col = in.dataset.column(column);
  if (col.role() != ColumnRole::attribute) throw Error(ErrorCode::kind_mismatch, "'" + attribute + "' is a target");
  const auto binned = bin_attribute(in.dataset, in.stats, in.measure, column, Extent(in.dataset.rows(), true),
                                    beam.binning_options());
  if (binned.degenerate) err << "warning: '" << attribute << "' takes a single value; one bin returned\n";
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  Sink sink(config, out);
  auto& os = sink.get();
  const auto& result = binned.result;

  if (config.format == OutputFormat::json) {
    Json doc;
    doc["command"] = "bin";
    doc["attribute"] = attribute;
    doc["measure"] = in.measure.name();
    doc["method"] = config.method;
    Json rows = Json::array();
    for (std::size_t b = 0; b < result.bins.size(); ++b) {
      const auto cond = Condition::interval(attribute, result.bins[b].lower, result.bins[b].upper);
      rows.push_back({{"interval", interval_text(cond, in.dataset)},
                      {"lower", number_or_null(result.bins[b].lower)},
                      {"upper", number_or_null(result.bins[b].upper)},
                      {"support", binned.extents[b].size()},
                      {"quality", result.per_bin_quality[b]}});
    }
    doc["bins"] = rows;
    Json summary;
    summary["objective"] = result.objective;
    summary["bins"] = result.bins.size();
    if (config.timing) summary["runtime_seconds"] = seconds;
    doc["summary"] = summary;
    os << doc.dump(2) << '\n';
    if (!config.timing) err << "# summary runtime_seconds=" << six(seconds) << '\n';
  } else {
    os << "interval\tsupport\tquality\n";
    for (std::size_t b = 0; b < result.bins.size(); ++b) {
      const auto cond = Condition::interval(attribute, result.bins[b].lower, result.bins[b].upper);
      os << interval_text(cond, in.dataset) << '\t' << binned.extents[b].size() << '\t'
         << six(result.per_bin_quality[b]) << '\n';
    }
    os << "# summary objective=" << six(result.objective) << " bins=" << result.bins.size() << '\n';
    report_runtime(config, seconds, os, err);
  }
  return 0;
}

int cmd_compare(const RunConfig& config, const std::vector<std::string>& methods, std::ostream& out,
                std::ostream& err) {
  if (methods.size() < 2) throw Error(ErrorCode::config, "compare needs at least two methods");
  for (const auto& m : methods) (void)parse_binning_method(m);
  const auto in = load(config, err);
  struct Row {
    std::string method;
    std::optional<double> average;
    double seconds;
  };
  std::vector<Row> rows;
  for (const auto& m : methods) {
    auto run_config = config;
    run_config.method = m;
    const auto beam = run_config.beam_config();
    const auto found = discover(in, beam);
    rows.push_back({m, found.results.empty() ? std::nullopt : std::optional(top_k_average(found.results, beam.top_k)),
                    found.seconds});
  }
  const auto relative = [&](const Row& row) -> std::optional<double> {
    if (!row.average || !rows.front().average || *rows.front().average == 0.0) return std::nullopt;
    return 100.0 * *row.average / *rows.front().average;
  };
  Sink sink(config, out);
  auto& os = sink.get();
  double total_seconds = 0.0;
  for (const auto& row : rows) total_seconds += row.seconds;

  if (config.format == OutputFormat::json) {
    Json doc;
    doc["command"] = "compare";
    doc["measure"] = in.measure.name();
    doc["base"] = methods.front();
    Json list = Json::array();
    for (const auto& row : rows) {
      const auto rel = relative(row);
      Json item{{"method", row.method},
                {"top_k_average", row.average ? Json(*row.average) : Json(nullptr)},
                {"relative_percent", rel ? Json(*rel) : Json(nullptr)}};
      if (config.timing) item["runtime_seconds"] = row.seconds;
      list.push_back(item);
    }
    doc["methods"] = list;
    os << doc.dump(2) << '\n';
    if (!config.timing) err << "# summary runtime_seconds=" << six(total_seconds) << '\n';
  } else {
    os << "method\ttop_k_average\trelative_percent\n";
    for (const auto& row : rows) {
      const auto rel = relative(row);
      os << row.method << '\t' << (row.average ? six(*row.average) : "nan") << '\t' << (rel ? six(*rel) : "nan")
         << '\n';
    }
    os << "# summary base=" << methods.front() << " k=" << config.top_k << '\n';
    report_runtime(config, total_seconds, os, err);
  }
  return 0;
}

namespace {

void add_common(CLI::App& sub, RunConfig& config, std::string& format, std::string& output) {
  sub.add_option("--data", config.data, "CSV file with a header row")->required();
  sub.add_option("--schema", config.schema, "Tab-separated schema file")->required();
  sub.add_option("--measure", config.measure, "wracc|zscore|kl|hd|qr")->capture_default_str();
  sub.add_option("--f-variant", config.f_variant, "qr support weighting: linear|entropy")->capture_default_str();
  sub.add_option("--beta", config.beta, "Number of initial bins")->capture_default_str();
  sub.add_option("--epsilon", config.epsilon, "qr subsampling rate in (0, 1]")->capture_default_str();
  sub.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  sub.add_option("--beam-width", config.beam_width, "Beam width")->capture_default_str();
  sub.add_option("--depth", config.max_depth, "Maximum number of conditions")->capture_default_str();
  sub.add_option("--top-k", config.top_k, "Size of the result set")->capture_default_str();
  sub.add_option("--min-support", config.min_support, "Minimum subgroup size (default 1% of rows)");
  sub.add_option("--on-missing", config.on_missing, "error|drop")->capture_default_str();
  sub.add_option("--output", output, "Write the report to this file");
  sub.add_option("--format", format, "tsv|json")->capture_default_str();
  sub.add_flag("--timing", config.timing, "Include the runtime line in the report");
}

void apply_threads(std::ostream& err) {
  const char* value = std::getenv("FLEXI_THREADS");
  if (value == nullptr || *value == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (*end != '\0' || n < 1) {
    err << "warning: ignoring FLEXI_THREADS='" << value << "'\n";
    return;
  }
  omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subgroup discovery with optimal binning of numeric attributes"};
  app.require_subcommand(1);
  RunConfig config;
  std::string format = "tsv";
  std::string output;
  std::string attribute;
  std::string methods = "flexi,sum,ef,ew";

  auto* discover_cmd = app.add_subcommand("discover", "Beam search for the top-k subgroups");
  add_common(*discover_cmd, config, format, output);
  discover_cmd->add_option("--method", config.method, "flexi|sum|ef|ew")->capture_default_str();

  auto* bin_cmd = app.add_subcommand("bin", "Bin one attribute over the full data");
  add_common(*bin_cmd, config, format, output);
  bin_cmd->add_option("--method", config.method, "flexi|sum|ef|ew")->capture_default_str();
  bin_cmd->add_option("--attribute", attribute, "Numeric or ordinal attribute")->required();

  auto* compare_cmd = app.add_subcommand("compare", "Top-k averages of several binning methods");
  add_common(*compare_cmd, config, format, output);
  compare_cmd->add_option("--methods", methods, "Comma-separated methods; the first is the 100% base")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (format == "tsv") {
      config.format = OutputFormat::tsv;
    } else if (format == "json") {
      config.format = OutputFormat::json;
    } else {
      throw Error(ErrorCode::config, "unknown format '" + format + "' (tsv|json)");
    }
    if (!output.empty()) config.output = output;
    apply_threads(err);
    if (discover_cmd->parsed()) return cmd_discover(config, out, err);
    if (bin_cmd->parsed()) return cmd_bin(config, attribute, out, err);
    std::vector<std::string> list;
    std::stringstream ss(methods);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) list.push_back(item);
    }
    return cmd_compare(config, list, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace flexi::cli
