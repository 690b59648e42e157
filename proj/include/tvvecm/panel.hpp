#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "tvvecm/calendar.hpp"

namespace tvvecm {

using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Monthly panel of price levels, possibly with missing cells.
///
/// `values` is T x n with one row per consecutive month starting at `start`;
/// months absent from the source file appear as fully masked rows so the time
/// axis has no gaps.  Cells with observed(t, j) == false hold NaN.
struct PricePanel {
  std::vector<std::string> names;  ///< column names, size n
  YearMonth start;                 ///< month of row 0
  Eigen::MatrixXd values;          ///< T x n levels, NaN where masked
  BoolGrid observed;               ///< T x n, true = value present

  [[nodiscard]] Eigen::Index rows() const { return values.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return values.cols(); }
  [[nodiscard]] bool fully_observed() const { return observed.all(); }
  [[nodiscard]] YearMonth month_at(Eigen::Index t) const { return start.plus_months(t); }
};

/// Fully observed panel of log levels (same time axis as its source panel).
struct LogPanel {
  std::vector<std::string> names;
  YearMonth start;
  Eigen::MatrixXd values;  ///< T x n

  [[nodiscard]] Eigen::Index rows() const { return values.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return values.cols(); }
  [[nodiscard]] YearMonth month_at(Eigen::Index t) const { return start.plus_months(t); }
};

/// First differences of a LogPanel; row t holds log(t+1) - log(t) of the
/// source, so `start` is one month after the source start.
struct DiffPanel {
  std::vector<std::string> names;
  YearMonth start;
  Eigen::MatrixXd values;  ///< (T-1) x n

  [[nodiscard]] Eigen::Index rows() const { return values.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return values.cols(); }
  [[nodiscard]] YearMonth month_at(Eigen::Index t) const { return start.plus_months(t); }
};

/// Calendar-year means of a monthly series (complete years only).
struct AnnualSeries {
  std::string name;
  int first_year = 1900;
  Eigen::VectorXd values;
};

/// Reads a monthly panel from CSV.
///
/// Layout: header row `month,<name1>,...`; first column is an ISO "YYYY-MM"
/// month, remaining columns are strictly positive price levels.  Empty or
/// non-numeric cells become masked entries.  Month gaps are filled with fully
/// masked rows.  Throws ParseError (bad date, naming the row), DomainError
/// (non-positive price, naming row and column) or OrderingError (dates not
/// strictly increasing).
PricePanel ingest_csv(std::istream& in);
PricePanel ingest_csv_file(const std::string& path);

/// Writes a panel in the same layout ingest_csv reads.  Values are printed
/// with shortest round-trip formatting, so ingest(emit(p)) reproduces every
/// finite value bit-identically.  Masked cells are written empty.
void emit_csv(const PricePanel& panel, std::ostream& out);
void emit_csv_file(const PricePanel& panel, const std::string& path);

/// Fills masked cells, leaving observed cells untouched.  See imputation.hpp
/// for the underlying seasonal state-space smoother.  `period` is the
/// seasonal cycle length in months (>= 1; 1 disables the seasonal part).
/// Throws InsufficientDataError when a column has fewer than 3*period
/// observed values and DomainError on non-finite observed values.
PricePanel impute(const PricePanel& panel, int period = 12);

/// Elementwise natural log of a fully observed, strictly positive panel.
/// Throws IncompleteDataError when any cell is masked, DomainError when any
/// value is not strictly positive.
LogPanel to_logs(const PricePanel& panel);

/// First differences along time.  Requires at least 2 rows
/// (InsufficientDataError otherwise).
DiffPanel difference(const LogPanel& logs);

/// Calendar-year means of a monthly series starting at `start`.  Partial
/// years at either boundary are dropped; throws InsufficientDataError when no
/// complete calendar year remains.
AnnualSeries annualize(const std::string& name, const YearMonth& start,
                       const Eigen::VectorXd& monthly);

/// Column-wise annualize over a panel.
std::vector<AnnualSeries> annualize(const LogPanel& logs);

}  // namespace tvvecm
