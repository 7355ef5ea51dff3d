#include "expdist/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "expdist/errors.hpp"

namespace expdist::csv {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  raise(Errc::bad_input, "column '" + name + "' not found in CSV header");
}

bool Table::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

Table parse(const std::string& text) {
  Table table;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) raise(Errc::missing_header, "empty CSV input");
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write '" + path + "'");
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  if (!out) raise(Errc::io_error, "failed writing '" + path + "'");
}

double to_number(const std::string& cell, std::size_t row_index) {
  const std::string s = trim(cell);
  double value = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || s.empty())
    raise(Errc::malformed_row, "row " + std::to_string(row_index) + ": non-numeric cell '" +
                                   cell + "'");
  return value;
}

double to_number_or_inf(const std::string& cell, std::size_t row_index) {
  if (lower(trim(cell)) == "inf") return std::numeric_limits<double>::infinity();
  return to_number(cell, row_index);
}

std::optional<double> to_optional_number(const std::string& cell, std::size_t row_index) {
  if (trim(cell).empty()) return std::nullopt;
  return to_number(cell, row_index);
}

long to_integer(const std::string& cell, std::size_t row_index) {
  const double v = to_number(cell, row_index);
  const long rounded = std::lround(v);
  if (std::abs(v - static_cast<double>(rounded)) > 1e-9)
    raise(Errc::malformed_row,
          "row " + std::to_string(row_index) + ": expected an integer, got '" + cell + "'");
  return rounded;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  // shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, value);
    double parsed = 0.0;
    std::sscanf(shorter, "%lf", &parsed);
    if (parsed == value) return shorter;
  }
  return buf;
}

}  // namespace expdist::csv
