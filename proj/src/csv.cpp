#include "tvvecm/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("can not open for writing: " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("can not open for reading: " + path);
  return in;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value has no CSV representation");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_number(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) return false;
  if (!std::isfinite(value)) return false;
  out = value;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  if (cells.empty()) cells.emplace_back();
  return cells;
}

void write_table(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

void write_table_file(const Table& table, const std::string& path) {
  auto out = open_output(path);
  write_table(table, out);
}

void write_annual_csv(const AnnualSeries& series, std::ostream& out) {
  out << "year," << series.name << '\n';
  for (Eigen::Index i = 0; i < series.values.size(); ++i) {
    out << (series.first_year + static_cast<int>(i)) << ',' << format_number(series.values[i])
        << '\n';
  }
}

void write_annual_csv_file(const AnnualSeries& series, const std::string& path) {
  auto out = open_output(path);
  write_annual_csv(series, out);
}

AnnualSeries read_annual_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("annual CSV is empty");
  auto header = split_csv_line(line);
  if (header.size() != 2) throw ParseError("annual CSV must have exactly two columns");
  AnnualSeries series;
  series.name = trim(header[1]);

  std::vector<double> values;
  int row_no = 1;
  int prev_year = 0;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) {
      throw ParseError("row " + std::to_string(row_no) + ": expected 2 cells");
    }
    double year_val = 0.0;
    if (!parse_number(cells[0], year_val) || year_val != std::floor(year_val)) {
      throw ParseError("row " + std::to_string(row_no) + ": bad year \"" + trim(cells[0]) +
                       "\"");
    }
    const int year = static_cast<int>(year_val);
    if (values.empty()) {
      series.first_year = year;
    } else if (year != prev_year + 1) {
      throw OrderingError("row " + std::to_string(row_no) + ": years must be consecutive");
    }
    prev_year = year;
    double v = 0.0;
    if (!parse_number(cells[1], v)) {
      throw ParseError("row " + std::to_string(row_no) + ": bad value \"" + trim(cells[1]) +
                       "\"");
    }
    values.push_back(v);
  }
  series.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return series;
}

AnnualSeries read_annual_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_annual_csv(in);
}

std::string read_file(const std::string& path) {
  auto in = open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
}

}  // namespace tvvecm
