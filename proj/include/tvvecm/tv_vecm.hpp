#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tvvecm/panel.hpp"

namespace tvvecm {

/// Error-correction fit whose coefficients follow random walks.
///
/// With beta held fixed, each equation i solves the penalized least squares
/// problem
///
///   min over theta_{i,1..T}:  sum_t (y_{i,t} - x_t' theta_{i,t})^2
///                             + lambda * sum_{t>=2} |theta_{i,t} - theta_{i,t-1}|^2
///
/// where x_t stacks the lagged differences and the error-correction scores
/// Y_t = beta'(1, X_{t-k})'.  theta_1 carries no penalty (diffuse start).
/// lambda is the ratio of observation-noise variance to parameter-innovation
/// variance: large lambda forces smooth paths, the limit recovers the
/// time-invariant fit.
struct TvVecmFit {
  std::vector<Eigen::MatrixXd> gamma_path;  ///< per period, n x n(k-1)
  std::vector<Eigen::MatrixXd> alpha_path;  ///< per period, n x r
  Eigen::MatrixXd beta;                     ///< fixed (n+1) x r, constant row first
  Eigen::MatrixXd residual_path;            ///< t_eff x n one-step residuals
  double smoothing_ratio = 1.0;
  int lag_order = 1;
  Eigen::Index effective_sample = 0;
  YearMonth first_month;  ///< month of the first coefficient/residual row
};

/// Fits the time-varying system.  Requires smoothing_ratio > 0
/// (ParameterError), beta with n+1 rows (ShapeError), a full-rank
/// time-invariant design (CollinearityError naming the columns) and at least
/// (regressors + 10) usable rows (InsufficientDataError).
TvVecmFit fit_tv_vecm(const DiffPanel& diffs, const LogPanel& levels, int k,
                      const Eigen::MatrixXd& beta, double smoothing_ratio);

/// Gaussian profile likelihood of the smoothing ratio on a log-spaced grid,
/// evaluated by the prediction-error decomposition of the equivalent
/// random-walk-coefficient state-space model (summed across equations).
/// Returns the grid maximiser; used by the CLI's `--lambda auto`.
double profile_smoothing_ratio(const DiffPanel& diffs, const LogPanel& levels, int k,
                               const Eigen::MatrixXd& beta,
                               double lambda_min = 1e-2, double lambda_max = 1e4,
                               int grid_points = 25);

/// The integration-speed index and its uncertainty.
struct IntegrationSpeedPath {
  Eigen::VectorXd zeta;          ///< sqrt of the largest eigenvalue of alpha_t alpha_t'
  Eigen::VectorXd lower;         ///< pointwise band, empty until bootstrapped
  Eigen::VectorXd upper;
  Eigen::VectorXd acceleration;  ///< first difference of zeta (length - 1)
  double coverage = 0.0;         ///< nominal band coverage, 0 when no bands
  YearMonth first_month;
};

/// Speed index of a fitted path: per period the square root of the largest
/// eigenvalue of alpha_t alpha_t' (equivalently the largest singular value of
/// alpha_t), computed by a symmetric eigendecomposition.
IntegrationSpeedPath integration_speed(const TvVecmFit& fit);

/// Residual-bootstrap pointwise bands for the speed index.
///
/// Each replication resamples whole centered residual rows i.i.d.,
/// regenerates the panel recursively through the fitted time-varying system
/// from the original initial conditions, refits with the same k, beta and
/// lambda, and records its speed path.  Bands are pointwise empirical
/// quantiles at (1 -+ coverage)/2.  Replications use per-index derived seeds,
/// so results are identical no matter how many threads run them.
///
/// Requires replications >= 100 and coverage in (0, 1) (ParameterError).
/// A diverging regenerated path raises InstabilityError naming the
/// replication.
IntegrationSpeedPath bootstrap_bands(const TvVecmFit& fit, const DiffPanel& diffs,
                                     const LogPanel& levels, int replications,
                                     double coverage, std::uint64_t seed,
                                     unsigned threads = 0);

}  // namespace tvvecm
