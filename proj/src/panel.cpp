#include "tvvecm/panel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tvvecm/csv.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/imputation.hpp"

namespace tvvecm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

struct RawRow {
  YearMonth month;
  std::vector<double> values;       // NaN where missing
  std::vector<bool> observed;
};

}  // namespace

PricePanel ingest_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("panel CSV is empty");
  auto header = split_csv_line(line);
  if (header.size() < 2) throw ParseError("panel CSV needs a month column and at least one series");

  PricePanel panel;
  for (std::size_t j = 1; j < header.size(); ++j) {
    const std::string name = trim(header[j]);
    if (name.empty()) throw ParseError("empty series name in header column " + std::to_string(j + 1));
    panel.names.push_back(name);
  }
  const std::size_t n = panel.names.size();

  std::vector<RawRow> raw;
  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != n + 1) {
      throw ParseError("row " + std::to_string(row_no) + ": expected " + std::to_string(n + 1) +
                       " cells, got " + std::to_string(cells.size()));
    }
    RawRow row;
    try {
      row.month = parse_year_month(trim(cells[0]));
    } catch (const ParseError& e) {
      throw ParseError("row " + std::to_string(row_no) + ": " + e.what());
    }
    if (!raw.empty() && row.month <= raw.back().month) {
      throw OrderingError("row " + std::to_string(row_no) + ": month " +
                          format_year_month(row.month) + " does not follow " +
                          format_year_month(raw.back().month));
    }
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      if (parse_number(cells[j + 1], v)) {
        if (v <= 0.0) {
          throw DomainError("row " + std::to_string(row_no) + ", column " + panel.names[j] +
                            ": price must be strictly positive, got " + trim(cells[j + 1]));
        }
        row.values.push_back(v);
        row.observed.push_back(true);
      } else {
        row.values.push_back(kNaN);
        row.observed.push_back(false);
      }
    }
    raw.push_back(std::move(row));
  }
  if (raw.empty()) throw ParseError("panel CSV has no data rows");

  // materialise month gaps as fully masked rows so the time axis is gapless
  panel.start = raw.front().month;
  const auto t_total = static_cast<Eigen::Index>(
      months_between(raw.front().month, raw.back().month) + 1);
  panel.values = Eigen::MatrixXd::Constant(t_total, static_cast<Eigen::Index>(n), kNaN);
  panel.observed = BoolGrid::Constant(t_total, static_cast<Eigen::Index>(n), false);
  for (const auto& row : raw) {
    const auto t = static_cast<Eigen::Index>(months_between(panel.start, row.month));
    for (std::size_t j = 0; j < n; ++j) {
      panel.values(t, static_cast<Eigen::Index>(j)) = row.values[j];
      panel.observed(t, static_cast<Eigen::Index>(j)) = row.observed[j];
    }
  }
  return panel;
}

PricePanel ingest_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("can not open for reading: " + path);
  return ingest_csv(in);
}

void emit_csv(const PricePanel& panel, std::ostream& out) {
  out << "month";
  for (const auto& name : panel.names) out << ',' << name;
  out << '\n';
  for (Eigen::Index t = 0; t < panel.rows(); ++t) {
    out << format_year_month(panel.month_at(t));
    for (Eigen::Index j = 0; j < panel.cols(); ++j) {
      out << ',';
      if (panel.observed(t, j)) out << format_number(panel.values(t, j));
    }
    out << '\n';
  }
}

void emit_csv_file(const PricePanel& panel, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("can not open for writing: " + path);
  emit_csv(panel, out);
}

PricePanel impute(const PricePanel& panel, int period) {
  if (period < 1) throw ParameterError("imputation period must be >= 1");
  for (Eigen::Index j = 0; j < panel.cols(); ++j) {
    Eigen::Index observed_count = 0;
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
      if (!panel.observed(t, j)) continue;
      ++observed_count;
      if (!std::isfinite(panel.values(t, j))) {
        throw DomainError("column " + panel.names[static_cast<std::size_t>(j)] +
                          ": non-finite observed value at row " + std::to_string(t));
      }
    }
    if (observed_count < 3 * static_cast<Eigen::Index>(period)) {
      throw InsufficientDataError("column " + panel.names[static_cast<std::size_t>(j)] +
                                  ": needs at least " + std::to_string(3 * period) +
                                  " observed values, has " + std::to_string(observed_count));
    }
  }

  PricePanel filled = panel;
  for (Eigen::Index j = 0; j < panel.cols(); ++j) {
    if (panel.observed.col(j).all()) continue;  // identity on complete columns
    const auto fit = fit_seasonal_smoother(panel.values.col(j), panel.observed.col(j), period);
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
      if (!panel.observed(t, j)) {
        filled.values(t, j) = fit.smoothed[t];
        filled.observed(t, j) = true;
      }
    }
  }
  return filled;
}

LogPanel to_logs(const PricePanel& panel) {
  if (!panel.fully_observed()) {
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
      for (Eigen::Index j = 0; j < panel.cols(); ++j) {
        if (!panel.observed(t, j)) {
          throw IncompleteDataError("masked cell at row " + std::to_string(t) + ", column " +
                                    panel.names[static_cast<std::size_t>(j)] +
                                    "; impute before taking logs");
        }
      }
    }
  }
  if ((panel.values.array() <= 0.0).any()) {
    throw DomainError("log transform requires strictly positive values");
  }
  LogPanel logs;
  logs.names = panel.names;
  logs.start = panel.start;
  // scalar std::log so the transform is bit-identical to element-wise libm
  logs.values = panel.values.unaryExpr([](double v) { return std::log(v); });
  return logs;
}

DiffPanel difference(const LogPanel& logs) {
  if (logs.rows() < 2) throw InsufficientDataError("differencing needs at least 2 rows");
  DiffPanel diffs;
  diffs.names = logs.names;
  diffs.start = logs.start.plus_months(1);
  diffs.values = logs.values.bottomRows(logs.rows() - 1) - logs.values.topRows(logs.rows() - 1);
  return diffs;
}

AnnualSeries annualize(const std::string& name, const YearMonth& start,
                       const Eigen::VectorXd& monthly) {
  const YearMonth end = start.plus_months(monthly.size() - 1);
  // first complete January..December window
  int first_year = start.month == 1 ? start.year : start.year + 1;
  int last_year = end.month == 12 ? end.year : end.year - 1;
  if (monthly.size() == 0 || last_year < first_year) {
    throw InsufficientDataError("no complete calendar year in series " + name);
  }
  AnnualSeries annual;
  annual.name = name;
  annual.first_year = first_year;
  annual.values.resize(last_year - first_year + 1);
  for (int year = first_year; year <= last_year; ++year) {
    const auto offset = months_between(start, YearMonth{year, 1});
    annual.values[year - first_year] =
        monthly.segment(static_cast<Eigen::Index>(offset), 12).mean();
  }
  return annual;
}

std::vector<AnnualSeries> annualize(const LogPanel& logs) {
  std::vector<AnnualSeries> out;
  out.reserve(static_cast<std::size_t>(logs.cols()));
  for (Eigen::Index j = 0; j < logs.cols(); ++j) {
    out.push_back(annualize(logs.names[static_cast<std::size_t>(j)], logs.start, logs.values.col(j)));
  }
  return out;
}

}  // namespace tvvecm
