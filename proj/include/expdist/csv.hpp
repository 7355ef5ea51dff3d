#pragma once

#include <optional>
#include <string>
#include <vector>

namespace expdist::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by header name; throws bad_input if absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

Table read_file(const std::string& path);
Table parse(const std::string& text);
void write_file(const std::string& path, const Table& table);

std::vector<std::string> split_line(const std::string& line);

// Numeric cell parsers. Raise malformed_row with row context on failure.
double to_number(const std::string& cell, std::size_t row_index);
// Accepts the literal "inf" (case-insensitive) for open upper limits.
double to_number_or_inf(const std::string& cell, std::size_t row_index);
std::optional<double> to_optional_number(const std::string& cell, std::size_t row_index);
long to_integer(const std::string& cell, std::size_t row_index);

std::string format_number(double value);

}  // namespace expdist::csv
