#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acctest {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

/// Reads a comma-separated table with a header row. Fields may be quoted
/// with double quotes; surrounding whitespace is trimmed; blank lines are
/// skipped. Throws ValidationError (with the line number) on ragged rows or
/// an empty file.
CsvTable read_csv(std::istream& in);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double value);

}  // namespace acctest
