#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tvvecm/panel.hpp"

namespace tvvecm {

/// Shortest decimal representation that parses back to the same double
/// (std::to_chars).  Non-finite values are rejected with DomainError; callers
/// encode missing data as empty cells instead.
std::string format_number(double v);

/// Parses one numeric cell.  Returns false (leaving out untouched) when the
/// trimmed cell is empty or not a finite number.
bool parse_number(const std::string& cell, double& out);

/// Splits one CSV record on commas (no quoting: none of the formats written
/// or read here embed commas in cells).
std::vector<std::string> split_csv_line(const std::string& line);

/// A rectangular table of preformatted cells; the writer joins them with
/// commas and newlines.  Used for every report-style output so formatting is
/// identical everywhere.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& table, std::ostream& out);
void write_table_file(const Table& table, const std::string& path);

/// Annual series CSV: header `year,<name>`, one row per year.
void write_annual_csv(const AnnualSeries& series, std::ostream& out);
void write_annual_csv_file(const AnnualSeries& series, const std::string& path);
AnnualSeries read_annual_csv(std::istream& in);
AnnualSeries read_annual_csv_file(const std::string& path);

/// Reads a whole file into a string (binary-exact, for byte comparisons).
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tvvecm
