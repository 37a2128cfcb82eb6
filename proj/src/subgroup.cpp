#include "flexi/subgroup.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "flexi/error.hpp"

namespace flexi {

namespace {

constexpr std::string_view kEverything = "(all)";

const Column& attribute_column(const Dataset& dataset, const std::string& name) {
  const auto& column = dataset.column(dataset.index_of(name));
  if (column.role() != ColumnRole::attribute) {
    throw Error(ErrorCode::kind_mismatch, "'" + name + "' is a target, not an attribute");
  }
  return column;
}

std::string bound_label(double bound, const Column* ordinal) {
  if (std::isinf(bound)) return bound < 0 ? "-inf" : "+inf";
  if (ordinal != nullptr) {
    const auto rank = static_cast<std::size_t>(std::floor(bound));
    if (rank < ordinal->domain().size()) return ordinal->domain()[rank];
  }
  return format_number(bound);
}

std::string render(const Condition& c, const Column* ordinal) {
  if (!c.is_interval()) return c.attribute() + " = " + c.as_equals().value;
  const auto& iv = c.as_interval();
  return c.attribute() + " in (" + bound_label(iv.lower, ordinal) + ", " + bound_label(iv.upper, ordinal) + "]";
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "+inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), res.ptr};
}

Condition Condition::interval(std::string attribute, double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
    throw Error(ErrorCode::invariant, "interval on '" + attribute + "' needs lower < upper");
  }
  return Condition(std::move(attribute), Interval{lower, upper});
}

Condition Condition::equals(std::string attribute, std::string value) {
  return Condition(std::move(attribute), Equals{std::move(value)});
}

Extent Condition::evaluate(const Dataset& dataset) const {
  const auto& column = attribute_column(dataset, attribute_);
  Extent out(dataset.rows());
  if (is_interval()) {
    if (column.kind() == ColumnKind::nominal) {
      throw Error(ErrorCode::kind_mismatch, "interval condition on nominal attribute '" + attribute_ + "'");
    }
    const auto& iv = as_interval();
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
      if (iv.contains(column.ordered_value(r))) out.insert(r);
    }
    return out;
  }
  if (column.kind() != ColumnKind::nominal) {
    throw Error(ErrorCode::kind_mismatch, "equality condition on non-nominal attribute '" + attribute_ + "'");
  }
  const auto code = column.code_of(as_equals().value);
  if (!code) return out;
  const auto codes = column.codes();
  for (std::size_t r = 0; r < codes.size(); ++r) {
    if (codes[r] == *code) out.insert(r);
  }
  return out;
}

SubgroupDescription::SubgroupDescription(std::vector<Condition> conditions) : conditions_(std::move(conditions)) {
  std::sort(conditions_.begin(), conditions_.end(),
            [](const Condition& a, const Condition& b) { return a.attribute() < b.attribute(); });
  for (std::size_t i = 1; i < conditions_.size(); ++i) {
    if (conditions_[i].attribute() == conditions_[i - 1].attribute()) {
      throw Error(ErrorCode::invariant, "two conditions on attribute '" + conditions_[i].attribute() + "'");
    }
  }
}

bool SubgroupDescription::uses(std::string_view attribute) const noexcept {
  return std::any_of(conditions_.begin(), conditions_.end(),
                     [&](const Condition& c) { return c.attribute() == attribute; });
}

Extent evaluate(const SubgroupDescription& description, const Dataset& dataset) {
  Extent out(dataset.rows(), true);
  for (const auto& c : description.conditions()) out = out & c.evaluate(dataset);
  return out;
}

SubgroupDescription refine(const SubgroupDescription& description, Condition condition) {
  if (description.uses(condition.attribute())) {
    throw Error(ErrorCode::invariant, "attribute '" + condition.attribute() + "' is already constrained");
  }
  auto conditions = description.conditions();
  conditions.push_back(std::move(condition));
  return SubgroupDescription(std::move(conditions));
}

std::string canonical_key(const SubgroupDescription& description) {
  if (description.empty()) return std::string(kEverything);
  return to_string(description);
}

std::string to_string(const Condition& condition) { return render(condition, nullptr); }

std::string to_string(const Condition& condition, const Dataset& dataset) {
  const auto& column = dataset.column(dataset.index_of(condition.attribute()));
  return render(condition, column.kind() == ColumnKind::ordinal ? &column : nullptr);
}

std::string to_string(const SubgroupDescription& description) {
  if (description.empty()) return std::string(kEverything);
  std::string out;
  for (const auto& c : description.conditions()) {
    if (!out.empty()) out += " AND ";
    out += to_string(c);
  }
  return out;
}

std::string to_string(const SubgroupDescription& description, const Dataset& dataset) {
  if (description.empty()) return std::string(kEverything);
  std::string out;
  for (const auto& c : description.conditions()) {
    if (!out.empty()) out += " AND ";
    out += to_string(c, dataset);
  }
  return out;
}

}  // namespace flexi
