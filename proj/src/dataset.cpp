#include "flexi/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "csv.hpp"
#include "flexi/error.hpp"

namespace flexi {

std::string_view to_string(ColumnKind kind) noexcept {
  switch (kind) {
    case ColumnKind::nominal: return "nominal";
    case ColumnKind::ordinal: return "ordinal";
    case ColumnKind::numeric: return "numeric";
  }
  return "?";
}

std::string_view to_string(ColumnRole role) noexcept {
  switch (role) {
    case ColumnRole::attribute: return "attribute";
    case ColumnRole::target: return "target";
    case ColumnRole::ignore: return "ignore";
  }
  return "?";
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

ColumnKind parse_kind(std::string_view text, std::size_t line_no) {
  if (text == "nominal") return ColumnKind::nominal;
  if (text == "ordinal") return ColumnKind::ordinal;
  if (text == "numeric") return ColumnKind::numeric;
  throw Error(ErrorCode::schema, "schema line " + std::to_string(line_no) + ": unknown kind '" +
                                     std::string(text) + "'");
}

ColumnRole parse_role(std::string_view text, std::size_t line_no) {
  if (text == "attribute") return ColumnRole::attribute;
  if (text == "target") return ColumnRole::target;
  if (text == "ignore") return ColumnRole::ignore;
  throw Error(ErrorCode::schema, "schema line " + std::to_string(line_no) + ": unknown role '" +
                                     std::string(text) + "'");
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "?"; }

}  // namespace

Schema Schema::parse(std::istream& in) {
  Schema schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.front() == "positive") {
      if (fields.size() != 3) {
        throw Error(ErrorCode::schema, "schema line " + std::to_string(line_no) +
                                           ": expected positive<TAB>column<TAB>value");
      }
      if (schema.positive) {
        throw Error(ErrorCode::schema, "schema declares more than one positive class");
      }
      schema.positive = PositiveClass{fields[1], fields[2]};
      continue;
    }
    if (fields.size() < 3 || fields.size() > 4) {
      throw Error(ErrorCode::schema, "schema line " + std::to_string(line_no) +
                                         ": expected name<TAB>kind<TAB>role[<TAB>ordering]");
    }
    ColumnSpec spec;
    spec.name = fields[0];
    spec.kind = parse_kind(fields[1], line_no);
    spec.role = parse_role(fields[2], line_no);
    if (fields.size() == 4) {
      if (spec.kind != ColumnKind::ordinal) {
        throw Error(ErrorCode::schema, "schema line " + std::to_string(line_no) +
                                           ": only ordinal columns take a value ordering");
      }
      for (auto& v : split(fields[3], ',')) spec.ordering.emplace_back(trim(v));
    }
    schema.columns.push_back(std::move(spec));
  }
  schema.validate();
  return schema;
}

Schema Schema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open schema file " + path.string());
  return parse(in);
}

void Schema::validate() const {
  std::set<std::string_view> names;
  bool has_attribute = false;
  bool has_target = false;
  for (const auto& c : columns) {
    if (c.name.empty()) throw Error(ErrorCode::schema, "empty column name in schema");
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::schema, "duplicate column name '" + c.name + "'");
    }
    if (c.kind == ColumnKind::ordinal) {
      if (c.ordering.empty()) {
        throw Error(ErrorCode::schema, "ordinal column '" + c.name + "' needs a value ordering");
      }
      std::set<std::string_view> seen;
      for (const auto& v : c.ordering) {
        if (!seen.insert(v).second) {
          throw Error(ErrorCode::schema, "ordinal column '" + c.name + "' repeats value '" + v + "'");
        }
      }
    }
    has_attribute |= c.role == ColumnRole::attribute;
    has_target |= c.role == ColumnRole::target;
  }
  if (!has_attribute) throw Error(ErrorCode::schema, "schema declares no attribute column");
  if (!has_target) throw Error(ErrorCode::schema, "schema declares no target column");
  if (positive) {
    const auto* spec = find(positive->column);
    if (spec == nullptr) {
      throw Error(ErrorCode::unknown_column, "positive class names unknown column '" + positive->column + "'");
    }
    if (spec->role != ColumnRole::target || spec->kind == ColumnKind::numeric) {
      throw Error(ErrorCode::schema, "positive class column '" + positive->column +
                                         "' must be a nominal or ordinal target");
    }
  }
}

const ColumnSpec* Schema::find(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Column Column::numeric(std::string name, ColumnRole role, std::vector<double> values) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ColumnKind::numeric;
  c.role_ = role;
  c.values_ = std::move(values);
  for (const double v : c.values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::parse, "non-finite value in column '" + c.name_ + "'");
  }
  return c;
}

Column Column::categorical(std::string name, ColumnKind kind, ColumnRole role,
                           std::vector<std::string> domain, std::vector<std::int32_t> codes) {
  if (kind == ColumnKind::numeric) {
    throw Error(ErrorCode::kind_mismatch, "categorical column '" + name + "' declared numeric");
  }
  Column c;
  c.name_ = std::move(name);
  c.kind_ = kind;
  c.role_ = role;
  c.domain_ = std::move(domain);
  c.codes_ = std::move(codes);
  const auto bound = static_cast<std::int32_t>(c.domain_.size());
  for (const auto code : c.codes_) {
    if (code < 0 || code >= bound) {
      throw Error(ErrorCode::invariant, "code outside domain in column '" + c.name_ + "'");
    }
  }
  return c;
}

std::size_t Column::size() const noexcept {
  return kind_ == ColumnKind::numeric ? values_.size() : codes_.size();
}

std::optional<std::int32_t> Column::code_of(std::string_view value) const {
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (domain_[i] == value) return static_cast<std::int32_t>(i);
  }
  return std::nullopt;
}

std::string Column::label(std::size_t row) const {
  if (kind_ != ColumnKind::numeric) return domain_[static_cast<std::size_t>(codes_[row])];
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), values_[row]);
  return {buf.data(), res.ptr};
}

Dataset::Dataset(std::vector<Column> columns, std::optional<PositiveLabel> positive)
    : columns_(std::move(columns)), positive_(positive) {
  if (columns_.empty()) throw Error(ErrorCode::schema, "dataset has no columns");
  rows_ = columns_.front().size();
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& c = columns_[i];
    if (c.size() != rows_) {
      throw Error(ErrorCode::invariant, "column '" + c.name() + "' has a different length");
    }
    if (!names.insert(c.name()).second) {
      throw Error(ErrorCode::schema, "duplicate column name '" + c.name() + "'");
    }
    if (c.role() == ColumnRole::ignore) {
      throw Error(ErrorCode::schema, "ignored column '" + c.name() + "' cannot be part of a dataset");
    }
    (c.role() == ColumnRole::target ? targets_ : attributes_).push_back(i);
  }
  if (rows_ == 0) throw Error(ErrorCode::empty_dataset, "dataset has no rows");
  if (attributes_.empty()) throw Error(ErrorCode::schema, "dataset has no attribute column");
  if (targets_.empty()) throw Error(ErrorCode::schema, "dataset has no target column");
  if (positive_) {
    if (positive_->column >= columns_.size()) throw Error(ErrorCode::invariant, "positive column out of range");
    const auto& c = columns_[positive_->column];
    if (c.role() != ColumnRole::target || c.kind() == ColumnKind::numeric ||
        positive_->code < 0 || static_cast<std::size_t>(positive_->code) >= c.domain().size()) {
      throw Error(ErrorCode::invariant, "invalid positive class for column '" + c.name() + "'");
    }
  }
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name() == name) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  throw Error(ErrorCode::unknown_column, "unknown column '" + std::string(name) + "'");
}

LoadResult read_csv(std::istream& in, const Schema& schema, MissingPolicy on_missing) {
  schema.validate();
  detail::CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw Error(ErrorCode::empty_dataset, "CSV input is empty");
  for (auto& h : header) h = std::string(trim(h));

  // Map schema columns onto header positions.
  std::vector<std::size_t> position(schema.columns.size());
  for (const auto& h : header) {
    if (schema.find(h) == nullptr) {
      throw Error(ErrorCode::unknown_column, "CSV column '" + h + "' is not declared in the schema");
    }
  }
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), schema.columns[c].name);
    if (it == header.end()) {
      throw Error(ErrorCode::unknown_column,
                  "schema column '" + schema.columns[c].name + "' is missing from the CSV header");
    }
    position[c] = static_cast<std::size_t>(it - header.begin());
  }

  const std::size_t width = schema.columns.size();
  std::vector<std::vector<double>> numeric(width);
  std::vector<std::vector<std::string>> text(width);
  std::vector<std::string> record;
  std::size_t dropped = 0;
  std::size_t line = 1;
  while (reader.next(record)) {
    ++line;
    if (record.size() == 1 && trim(record[0]).empty()) continue;
    if (record.size() != header.size()) {
      throw Error(ErrorCode::parse, "CSV record " + std::to_string(line) + " has " +
                                        std::to_string(record.size()) + " fields, expected " +
                                        std::to_string(header.size()));
    }
    bool missing = false;
    for (std::size_t c = 0; c < width && !missing; ++c) {
      if (schema.columns[c].role == ColumnRole::ignore) continue;
      if (is_missing(trim(record[position[c]]))) {
        if (on_missing == MissingPolicy::error) {
          throw Error(ErrorCode::missing_value, "missing value in data row " + std::to_string(line - 1) +
                                                    ", column '" + schema.columns[c].name + "'");
        }
        missing = true;
      }
    }
    if (missing) {
      ++dropped;
      continue;
    }
    for (std::size_t c = 0; c < width; ++c) {
      const auto cell = trim(record[position[c]]);
      const auto& spec = schema.columns[c];
      if (spec.role == ColumnRole::ignore) continue;
      if (spec.kind == ColumnKind::numeric) {
        double value = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(value)) {
          throw Error(ErrorCode::parse, "data row " + std::to_string(line - 1) + ", column '" + spec.name +
                                            "': '" + std::string(cell) + "' is not a number");
        }
        numeric[c].push_back(value);
      } else {
        text[c].emplace_back(cell);
      }
    }
  }

  std::vector<Column> columns;
  columns.reserve(width);
  std::optional<PositiveLabel> positive;
  for (std::size_t c = 0; c < width; ++c) {
    const auto& spec = schema.columns[c];
    if (spec.role == ColumnRole::ignore) continue;
    if (spec.kind == ColumnKind::numeric) {
      columns.push_back(Column::numeric(spec.name, spec.role, std::move(numeric[c])));
      continue;
    }
    std::vector<std::string> domain;
    if (spec.kind == ColumnKind::ordinal) {
      domain = spec.ordering;
    } else {
      std::set<std::string> values(text[c].begin(), text[c].end());
      domain.assign(values.begin(), values.end());
    }
    std::unordered_map<std::string_view, std::int32_t> lookup;
    for (std::size_t i = 0; i < domain.size(); ++i) lookup.emplace(domain[i], static_cast<std::int32_t>(i));
    std::vector<std::int32_t> codes;
    codes.reserve(text[c].size());
    for (std::size_t r = 0; r < text[c].size(); ++r) {
      const auto it = lookup.find(text[c][r]);
      if (it == lookup.end()) {
        throw Error(ErrorCode::ordinal_value, "value '" + text[c][r] + "' of ordinal column '" +
                                                  spec.name + "' is absent from its declared ordering");
      }
      codes.push_back(it->second);
    }
    columns.push_back(Column::categorical(spec.name, spec.kind, spec.role, std::move(domain), std::move(codes)));
  }
  if (columns.front().size() == 0) {
    throw Error(ErrorCode::empty_dataset, dropped > 0 ? "no rows left after dropping missing values"
                                                      : "CSV input has no data rows");
  }

  Dataset dataset(std::move(columns));
  if (schema.positive) {
    const auto& col = dataset.column(dataset.index_of(schema.positive->column));
    if (col.kind() == ColumnKind::nominal) {
      return {binarize_target(dataset, schema.positive->column, schema.positive->value), dropped};
    }
    const auto code = col.code_of(schema.positive->value);
    if (!code) {
      throw Error(ErrorCode::domain, "positive value '" + schema.positive->value +
                                         "' not in the domain of '" + col.name() + "'");
    }
    std::vector<Column> copy = dataset.columns();
    return {Dataset(std::move(copy), PositiveLabel{dataset.index_of(col.name()), *code}), dropped};
  }
  return {std::move(dataset), dropped};
}

LoadResult load_csv(const std::filesystem::path& path, const Schema& schema, MissingPolicy on_missing) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open data file " + path.string());
  return read_csv(in, schema, on_missing);
}

Dataset binarize_target(const Dataset& dataset, std::string_view column, std::string_view positive_value) {
  const std::size_t index = dataset.index_of(column);
  const auto& source = dataset.column(index);
  if (source.role() != ColumnRole::target || source.kind() != ColumnKind::nominal) {
    throw Error(ErrorCode::kind_mismatch, "column '" + source.name() + "' is not a nominal target");
  }
  const auto positive_code = source.code_of(positive_value);
  if (!positive_code) {
    throw Error(ErrorCode::domain, "value '" + std::string(positive_value) + "' is not in the domain of '" +
                                       source.name() + "'");
  }
  // Keep the original negative label when the target already is binary.
  std::string negative = "not_" + std::string(positive_value);
  if (source.domain().size() == 2) negative = source.domain()[*positive_code == 0 ? 1 : 0];

  std::vector<std::int32_t> codes(source.codes().size());
  for (std::size_t r = 0; r < codes.size(); ++r) codes[r] = source.codes()[r] == *positive_code ? 1 : 0;

  std::vector<Column> columns = dataset.columns();
  columns[index] = Column::categorical(source.name(), ColumnKind::nominal, ColumnRole::target,
                                       {negative, std::string(positive_value)}, std::move(codes));
  return Dataset(std::move(columns), PositiveLabel{index, 1});
}

}  // namespace flexi
