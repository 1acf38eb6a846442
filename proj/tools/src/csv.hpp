#pragma once

// RFC 4180 CSV: comma separated, CRLF line ends, fields quoted when they hold
// a comma, quote, CR or LF. Numbers use the C locale.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chainglue::cli {

/// Bumped whenever a column is added, removed or reordered.
inline constexpr int kCsvSchemaVersion = 1;

std::string csv_escape(const std::string& field);
/// Shortest "%.17g" round-trip form; NaN and unset values become "".
std::string csv_number(double value);
std::string csv_number(std::optional<double> value);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);
  /// Throws std::invalid_argument if the row width differs from the header.
  void row(const std::vector<std::string>& fields);
  std::size_t columns() const { return columns_; }

 private:
  void write(const std::vector<std::string>& fields);
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace chainglue::cli
