#include "tvvecm/report.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

std::string fmt(double v) { return format_number(v); }

void append_moment_rows(Table& table, const Eigen::MatrixXd& values,
                        const std::vector<AdfGlsResult>& tests, const std::string& prefix) {
  const auto cols = values.cols();
  const auto rows = values.rows();
  std::vector<std::string> mean_row{prefix + ".mean"};
  std::vector<std::string> sd_row{prefix + ".sd"};
  std::vector<std::string> min_row{prefix + ".min"};
  std::vector<std::string> max_row{prefix + ".max"};
  std::vector<std::string> stat_row{prefix + ".adf_gls"};
  std::vector<std::string> lag_row{prefix + ".lags"};
  std::vector<std::string> ar_row{prefix + ".ar_sum"};
  std::vector<std::string> n_row{prefix + ".n"};
  for (Eigen::Index j = 0; j < cols; ++j) {
    const auto col = values.col(j);
    const double mean = col.mean();
    const double sd = rows > 1 ? std::sqrt((col.array() - mean).square().sum() /
                                           static_cast<double>(rows - 1))
                               : 0.0;
    mean_row.push_back(fmt(mean));
    sd_row.push_back(fmt(sd));
    min_row.push_back(fmt(col.minCoeff()));
    max_row.push_back(fmt(col.maxCoeff()));
    const auto& test = tests[static_cast<std::size_t>(j)];
    stat_row.push_back(fmt(test.statistic));
    lag_row.push_back(std::to_string(test.lags));
    ar_row.push_back(fmt(test.phi_hat));
    n_row.push_back(std::to_string(rows));
  }
  table.rows.push_back(mean_row);
  table.rows.push_back(sd_row);
  table.rows.push_back(min_row);
  table.rows.push_back(max_row);
  table.rows.push_back(stat_row);
  table.rows.push_back(lag_row);
  table.rows.push_back(ar_row);
  table.rows.push_back(n_row);
}

}  // namespace

Table build_descriptives_table(const LogPanel& levels, const DiffPanel& diffs,
                               const std::vector<AdfGlsResult>& level_tests,
                               const std::vector<AdfGlsResult>& diff_tests) {
  const auto n = static_cast<std::size_t>(levels.values.cols());
  if (level_tests.size() != n || diff_tests.size() != n) {
    throw AlignmentError("one unit-root result per series is required");
  }
  if (diffs.values.cols() != levels.values.cols()) {
    throw AlignmentError("level and difference panels disagree on the series count");
  }
  Table table;
  table.header.push_back("statistic");
  for (const auto& name : levels.names) table.header.push_back(name);
  append_moment_rows(table, levels.values, level_tests, "level");
  append_moment_rows(table, diffs.values, diff_tests, "diff");
  return table;
}

Table build_rank_table(const CointegrationResult& result) {
  Table table;
  table.header = {"null",          "eigenvalue",    "maxeig_stat",
                  "maxeig_cv_1pct", "maxeig_reject_1pct", "trace_stat",
                  "trace_cv_1pct",  "trace_reject_1pct"};
  const auto n = result.eigenvalues.size();
  for (Eigen::Index r = 0; r < n; ++r) {
    std::vector<std::string> row;
    row.push_back(r == 0 ? "None" : "At most " + std::to_string(r));
    row.push_back(fmt(result.eigenvalues[r]));
    row.push_back(fmt(result.maxeig_stats[r]));
    row.push_back(fmt(result.maxeig_cv_1pct[r]));
    row.push_back(result.maxeig_stats[r] > result.maxeig_cv_1pct[r] ? "yes" : "no");
    row.push_back(fmt(result.trace_stats[r]));
    row.push_back(fmt(result.trace_cv_1pct[r]));
    row.push_back(result.trace_stats[r] > result.trace_cv_1pct[r] ? "yes" : "no");
    table.rows.push_back(row);
  }
  return table;
}

Table build_coefficient_table(const VecmFit& fit) {
  Table table;
  table.header.push_back("term");
  for (const auto& eq : fit.equation_names) {
    table.header.push_back(eq);
    table.header.push_back(eq + "_se");
  }
  const auto n = fit.pi.rows();
  const auto gamma_cols = fit.gamma.cols();
  for (Eigen::Index j = 0; j < gamma_cols; ++j) {
    std::vector<std::string> row{fit.regressor_names[static_cast<std::size_t>(j)]};
    for (Eigen::Index eq = 0; eq < n; ++eq) {
      row.push_back(fmt(fit.gamma(eq, j)));
      row.push_back("(" + fmt(fit.gamma_se(eq, j)) + ")");
    }
    table.rows.push_back(row);
  }
  // long-run impact, constant column first; row labels recover the series
  // names from the equation labels ("d<name>")
  for (Eigen::Index j = 0; j < fit.pi.cols(); ++j) {
    std::string label = "const";
    if (j > 0) {
      const auto& eq = fit.equation_names[static_cast<std::size_t>(j) - 1];
      label = eq.size() > 1 && eq.front() == 'd' ? eq.substr(1) : eq;
    }
    std::vector<std::string> row{label};
    for (Eigen::Index eq = 0; eq < n; ++eq) {
      row.push_back(fmt(fit.pi(eq, j)));
      row.push_back("(" + fmt(fit.pi_se(eq, j)) + ")");
    }
    table.rows.push_back(row);
  }
  std::vector<std::string> r2_row{"adj_r2"};
  for (Eigen::Index eq = 0; eq < n; ++eq) {
    r2_row.push_back(fmt(fit.r2_adj[eq]));
    r2_row.emplace_back();
  }
  table.rows.push_back(r2_row);
  std::vector<std::string> lc_row{"constancy_lc"};
  lc_row.push_back(fmt(fit.lc_stat));
  for (Eigen::Index c = 1; c < 2 * n; ++c) lc_row.emplace_back();
  table.rows.push_back(lc_row);
  return table;
}

Table build_speed_table(const IntegrationSpeedPath& path) {
  Table table;
  table.header = {"date", "zeta", "lo", "hi", "accel"};
  const bool has_bands = path.lower.size() == path.zeta.size() && path.lower.size() > 0 &&
                         path.coverage > 0.0;
  for (Eigen::Index t = 0; t < path.zeta.size(); ++t) {
    std::vector<std::string> row;
    row.push_back(format_year_month(path.first_month.plus_months(static_cast<int>(t))));
    row.push_back(fmt(path.zeta[t]));
    row.push_back(has_bands ? fmt(path.lower[t]) : std::string{});
    row.push_back(has_bands ? fmt(path.upper[t]) : std::string{});
    row.push_back(t > 0 ? fmt(path.acceleration[t - 1]) : std::string{});
    table.rows.push_back(row);
  }
  return table;
}

Table build_bivariate_table(const BivariateVecm& biv) {
  Table table;
  table.header = {"panel", "term", "column", "value"};
  const auto flatten = [&table](const Table& t, const std::string& panel) {
    for (const auto& row : t.rows) {
      for (std::size_t j = 1; j < row.size(); ++j) {
        if (row[j].empty()) continue;
        table.rows.push_back({panel, row[0], t.header[j], row[j]});
      }
    }
  };
  flatten(build_rank_table(biv.coint), "rank");
  flatten(build_coefficient_table(biv.fit), "coefficients");
  return table;
}

}  // namespace tvvecm
