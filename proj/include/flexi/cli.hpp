#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flexi/binning.hpp"
#include "flexi/dataset.hpp"
#include "flexi/search.hpp"

namespace flexi::cli {

enum class OutputFormat { tsv, json };

struct RunConfig {
  std::filesystem::path data;
  std::filesystem::path schema;
  std::string measure = "wracc";
  std::string f_variant = "linear";
  std::string method = "flexi";
  std::size_t beta = 20;
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::size_t beam_width = 10;
  std::size_t max_depth = 2;
  std::size_t top_k = 50;
  std::optional<std::size_t> min_support;
  std::string on_missing = "error";
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::tsv;
  // Adds the wall-clock line to the report; otherwise it goes to stderr so
  // reports of identical runs stay byte-identical.
  bool timing = false;

  [[nodiscard]] BeamConfig beam_config() const;
  [[nodiscard]] MissingPolicy missing_policy() const;
};

// Exact qualities are recomputed for subsampled qr runs up to this many rows.
inline constexpr std::size_t kExactRescoreLimit = 10000;

// Each command writes its report to config.output if set, else to `out`.
int cmd_discover(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bin(const RunConfig& config, const std::string& attribute, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, const std::vector<std::string>& methods, std::ostream& out,
                std::ostream& err);

/// Parses argv and dispatches to a subcommand; returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flexi::cli
