#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sobnet {

/// A CSV file: `#` comment lines, one header row, data rows. Cells are kept
/// as text so numbers round-trip exactly as written.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws std::out_of_range when missing.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const noexcept;
  std::vector<double> numbers(const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

/// Shortest round-trip decimal, with "inf"/"-inf"/"nan" for non-finite values.
std::string csv_number(double v);
std::string csv_bool(bool b);

/// Ordered key/value pairs echoed into a CSV header.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

}  // namespace sobnet
