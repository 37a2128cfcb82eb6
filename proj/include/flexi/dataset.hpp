#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flexi {

enum class ColumnKind { nominal, ordinal, numeric };
// Ignored columns are declared so the header validates but are not loaded.
enum class ColumnRole { attribute, target, ignore };

[[nodiscard]] std::string_view to_string(ColumnKind kind) noexcept;
[[nodiscard]] std::string_view to_string(ColumnRole role) noexcept;

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  ColumnRole role = ColumnRole::attribute;
  // Declared value order, lowest first. Only meaningful for ordinal columns.
  std::vector<std::string> ordering;
};

struct PositiveClass {
  std::string column;
  std::string value;
};

/// Column declarations read from a tab-separated schema file:
///
///   name<TAB>kind<TAB>role[<TAB>v1,v2,...]
///   positive<TAB>column<TAB>value
///
/// Blank lines and lines starting with '#' are skipped.
struct Schema {
  std::vector<ColumnSpec> columns;
  std::optional<PositiveClass> positive;

  static Schema parse(std::istream& in);
  static Schema load(const std::filesystem::path& path);

  void validate() const;
  [[nodiscard]] const ColumnSpec* find(std::string_view name) const;
};

/// One typed column. Nominal and ordinal values are interned: `codes()` holds
/// indices into `domain()`. For ordinal columns the code is the rank in the
/// declared ordering; for nominal columns the domain is sorted lexicographically.
class Column {
 public:
  static Column numeric(std::string name, ColumnRole role, std::vector<double> values);
  static Column categorical(std::string name, ColumnKind kind, ColumnRole role,
                            std::vector<std::string> domain, std::vector<std::int32_t> codes);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] ColumnKind kind() const noexcept { return kind_; }
  [[nodiscard]] ColumnRole role() const noexcept { return role_; }
  [[nodiscard]] std::size_t size() const noexcept;

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const std::int32_t> codes() const noexcept { return codes_; }
  [[nodiscard]] const std::vector<std::string>& domain() const noexcept { return domain_; }

  // Position of `row` in the column's total order: the value itself for
  // numeric columns, the rank code for ordinal ones.
  [[nodiscard]] double ordered_value(std::size_t row) const noexcept {
    return kind_ == ColumnKind::numeric ? values_[row] : static_cast<double>(codes_[row]);
  }

  [[nodiscard]] std::optional<std::int32_t> code_of(std::string_view value) const;
  [[nodiscard]] std::string label(std::size_t row) const;

 private:
  Column() = default;

  std::string name_;
  ColumnKind kind_ = ColumnKind::numeric;
  ColumnRole role_ = ColumnRole::attribute;
  std::vector<double> values_;
  std::vector<std::int32_t> codes_;
  std::vector<std::string> domain_;
};

struct PositiveLabel {
  std::size_t column = 0;
  std::int32_t code = 0;
};

/// Immutable in-memory table with at least one attribute and one target.
class Dataset {
 public:
  explicit Dataset(std::vector<Column> columns, std::optional<PositiveLabel> positive = {});

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t width() const noexcept { return columns_.size(); }
  [[nodiscard]] const Column& column(std::size_t index) const { return columns_.at(index); }
  [[nodiscard]] const std::vector<Column>& columns() const noexcept { return columns_; }

  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
  // Like find() but raises unknown_column.
  [[nodiscard]] std::size_t index_of(std::string_view name) const;

  [[nodiscard]] const std::vector<std::size_t>& attributes() const noexcept { return attributes_; }
  [[nodiscard]] const std::vector<std::size_t>& targets() const noexcept { return targets_; }
  [[nodiscard]] const std::optional<PositiveLabel>& positive() const noexcept { return positive_; }

 private:
  std::vector<Column> columns_;
  std::vector<std::size_t> attributes_;
  std::vector<std::size_t> targets_;
  std::optional<PositiveLabel> positive_;
  std::size_t rows_ = 0;
};

enum class MissingPolicy { error, drop_row };

struct LoadResult {
  Dataset dataset;
  std::size_t dropped_rows = 0;
};

LoadResult read_csv(std::istream& in, const Schema& schema, MissingPolicy on_missing);
LoadResult load_csv(const std::filesystem::path& path, const Schema& schema,
                    MissingPolicy on_missing);

/// One-vs-rest relabelling of a nominal target; the result marks
/// `positive_value` as the positive class for WRAcc.
Dataset binarize_target(const Dataset& dataset, std::string_view column,
                        std::string_view positive_value);

}  // namespace flexi
