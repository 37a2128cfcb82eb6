#pragma once

#include <istream>
#include <string>
#include <vector>

#include "flexi/error.hpp"

namespace flexi::detail {

// RFC-4180 record reader: comma separated, double-quoted fields may contain
// commas, line breaks and doubled quotes. Accepts LF and CRLF line endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    char ch = 0;
    while (in_.get(ch)) {
      any = true;
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          field.push_back(ch);
        }
        continue;
      }
      if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (ch == '\n') {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(std::move(field));
        return true;
      } else {
        field.push_back(ch);
      }
    }
    if (quoted) throw Error(ErrorCode::parse, "unterminated quoted CSV field");
    if (!any) return false;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::istream& in_;
};

}  // namespace flexi::detail
