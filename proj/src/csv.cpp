#include "sobnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sobnet/network_io.hpp"

namespace sobnet {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("missing CSV column: " + name);
}

bool CsvTable::has_column(const std::string& name) const noexcept {
  for (const auto& c : columns) {
    if (c == name) return true;
  }
  return false;
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    const std::string& s = r.at(c);
    if (s == "inf") {
      out.push_back(INFINITY);
    } else if (s == "-inf") {
      out.push_back(-INFINITY);
    } else if (s == "nan") {
      out.push_back(NAN);
    } else if (s == "true" || s == "false") {
      out.push_back(s == "true" ? 1.0 : 0.0);
    } else {
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a number in column " + name + ": " + s);
      }
      out.push_back(v);
    }
  }
  return out;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& c : table.comments) os << "# " << c << '\n';
  write_row(os, table.columns);
  for (const auto& r : table.rows) write_row(os, r);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_csv(f, table);
  if (!f) throw std::runtime_error("write failed: " + path);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!have_header) {
      t.columns = split(line);
      have_header = true;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (!have_header) throw std::invalid_argument("CSV has no header row");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  return read_csv(f);
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

}  // namespace sobnet
