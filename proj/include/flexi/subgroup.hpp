#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flexi/dataset.hpp"
#include "flexi/extent.hpp"

namespace flexi {

/// Half-open interval (lower, upper]; lower may be -inf, upper +inf. For
/// ordinal attributes the bounds are rank codes.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool contains(double value) const noexcept { return value > lower && value <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Equals {
  std::string value;
  friend bool operator==(const Equals&, const Equals&) = default;
};

class Condition {
 public:
  static Condition interval(std::string attribute, double lower, double upper);
  static Condition equals(std::string attribute, std::string value);

  [[nodiscard]] const std::string& attribute() const noexcept { return attribute_; }
  [[nodiscard]] bool is_interval() const noexcept { return std::holds_alternative<Interval>(form_); }
  [[nodiscard]] const Interval& as_interval() const { return std::get<Interval>(form_); }
  [[nodiscard]] const Equals& as_equals() const { return std::get<Equals>(form_); }

  /// Rows of `dataset` satisfying this condition alone.
  [[nodiscard]] Extent evaluate(const Dataset& dataset) const;

  friend bool operator==(const Condition&, const Condition&) = default;

 private:
  Condition(std::string attribute, std::variant<Interval, Equals> form)
      : attribute_(std::move(attribute)), form_(std::move(form)) {}

  std::string attribute_;
  std::variant<Interval, Equals> form_;
};

/// Conjunction of conditions on distinct attributes, kept sorted by attribute
/// name so equal condition sets compare and print identically.
class SubgroupDescription {
 public:
  SubgroupDescription() = default;
  explicit SubgroupDescription(std::vector<Condition> conditions);

  [[nodiscard]] const std::vector<Condition>& conditions() const noexcept { return conditions_; }
  [[nodiscard]] bool empty() const noexcept { return conditions_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return conditions_.size(); }
  [[nodiscard]] bool uses(std::string_view attribute) const noexcept;

  friend bool operator==(const SubgroupDescription&, const SubgroupDescription&) = default;

 private:
  std::vector<Condition> conditions_;
};

[[nodiscard]] Extent evaluate(const SubgroupDescription& description, const Dataset& dataset);
[[nodiscard]] SubgroupDescription refine(const SubgroupDescription& description, Condition condition);

/// Dataset-independent identity string; numbers print in shortest
/// round-trip form so distinct bounds never collide.
[[nodiscard]] std::string canonical_key(const SubgroupDescription& description);

// "A in (l, u] AND B = v". With a dataset, ordinal bounds print as labels.
[[nodiscard]] std::string to_string(const Condition& condition);
[[nodiscard]] std::string to_string(const Condition& condition, const Dataset& dataset);
[[nodiscard]] std::string to_string(const SubgroupDescription& description);
[[nodiscard]] std::string to_string(const SubgroupDescription& description, const Dataset& dataset);

[[nodiscard]] std::string format_number(double value);

}  // namespace flexi
