#pragma once

#include <stdexcept>
#include <string>

namespace flexi {

enum class ErrorCode {
  io,
  schema,
  unknown_column,
  parse,
  missing_value,
  ordinal_value,
  empty_dataset,
  domain,
  kind_mismatch,
  invariant,
  inapplicable,
  degenerate_target,
  empty_extent,
  incomplete_table,
  config,
};

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flexi
