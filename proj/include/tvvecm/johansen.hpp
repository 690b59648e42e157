#pragma once

#include <Eigen/Dense>
#include <optional>

#include "tvvecm/panel.hpp"

namespace tvvecm {

/// Which likelihood-ratio statistic a critical value belongs to.
enum class RankStatistic { kTrace, kMaxEigen };

/// Reduced-rank cointegration analysis of a panel of log levels.
///
/// The estimated system is the error-correction form with the constant
/// restricted to the long-run space:
///
///   dX_t = Gamma_1 dX_{t-1} + ... + Gamma_{k-1} dX_{t-k+1}
///          + alpha * beta' * (1, X_{t-k})' + e_t
///
/// so beta is (n+1) x r with the constant coefficient in row 0 and
/// beta' S_kk beta = I (sample normalisation).
struct CointegrationResult {
  Eigen::VectorXd eigenvalues;    ///< n squared canonical correlations, descending
  Eigen::VectorXd trace_stats;    ///< entry r: statistic for null rank <= r, r = 0..n-1
  Eigen::VectorXd maxeig_stats;   ///< entry r: statistic for rank r vs r+1
  Eigen::VectorXd trace_cv_1pct;  ///< critical values aligned with trace_stats
  Eigen::VectorXd trace_cv_5pct;
  Eigen::VectorXd maxeig_cv_1pct;
  Eigen::VectorXd maxeig_cv_5pct;
  Eigen::MatrixXd beta;   ///< (n+1) x r cointegration vectors, constant row first
  Eigen::MatrixXd alpha;  ///< n x r adjustment loadings
  int selected_rank = 0;  ///< smallest r whose trace null is not rejected at 1%
  int lag_order = 1;      ///< k
  Eigen::Index effective_sample = 0;  ///< T - k usable rows
};

/// Asymptotic critical value for the restricted-constant case, indexed by the
/// number of common trends m = n - r under the null (supported m = 1..4) and
/// level 0.01 or 0.05.  Throws ParameterError outside that range.
double johansen_critical_value(RankStatistic stat, double level, int common_trends);

/// Runs the reduced-rank analysis at lag order k >= 1.
///
/// `diffs` must be difference(levels) (checked).  `rank` forces the number of
/// reported beta/alpha columns; by default the sequentially selected rank is
/// used.  Throws InsufficientDataError when T - k leaves fewer than 10n
/// usable rows and CollinearityError when a moment matrix is numerically
/// singular.
CointegrationResult johansen(const DiffPanel& diffs, const LogPanel& levels, int k,
                             std::optional<int> rank = std::nullopt);

/// Long-run scores Y_t = beta' (1, x_t)' for every row of the panel
/// (T x r).  beta must have levels.cols() + 1 rows (ShapeError otherwise).
Eigen::MatrixXd longrun_score(const LogPanel& levels, const Eigen::MatrixXd& beta);

}  // namespace tvvecm
