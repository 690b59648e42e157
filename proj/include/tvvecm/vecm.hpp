#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "tvvecm/johansen.hpp"
#include "tvvecm/panel.hpp"

namespace tvvecm {

/// Time-invariant error-correction fit.
///
/// Equation-by-equation least squares of dX_t on the lagged differences and
/// the long-run block.  When `beta` is supplied the long-run block is the r
/// error-correction scores Y_t = beta'(1, X_{t-k})' and pi = alpha * beta';
/// otherwise the full (1, X_{t-k}) block enters unrestricted and alpha/beta
/// are recovered from the thin SVD of pi.
struct VecmFit {
  Eigen::MatrixXd gamma;     ///< n x n(k-1) short-run coefficients
  Eigen::MatrixXd gamma_se;  ///< HAC standard errors, same shape
  Eigen::MatrixXd pi;        ///< n x (n+1) long-run matrix, constant column first
  Eigen::MatrixXd pi_se;     ///< HAC standard errors, same shape
  Eigen::MatrixXd alpha;     ///< n x r loadings
  Eigen::MatrixXd alpha_se;  ///< n x r (only when beta was supplied; empty otherwise)
  Eigen::MatrixXd beta;      ///< (n+1) x r, constant row first
  bool beta_supplied = false;
  Eigen::MatrixXd residuals;  ///< t_eff x n
  Eigen::MatrixXd fitted;     ///< t_eff x n
  Eigen::VectorXd r2_adj;     ///< adjusted R^2 per equation
  double lc_stat = 0.0;       ///< joint parameter-constancy statistic
  int lc_param_count = 0;     ///< score dimension the statistic accumulates over
  int lag_order = 1;
  Eigen::Index effective_sample = 0;
  YearMonth first_month;                       ///< month of first fitted row
  std::vector<std::string> regressor_names;    ///< z1 names then long-run block names
  std::vector<std::string> equation_names;     ///< "d<series>"
};

/// Fits the system at lag order k >= 1.  Throws CollinearityError (naming
/// columns) on rank-deficient designs and InsufficientDataError when fewer
/// than (regressors + 10) usable rows remain.
VecmFit fit_vecm(const DiffPanel& diffs, const LogPanel& levels, int k,
                 const std::optional<Eigen::MatrixXd>& beta = std::nullopt);

/// Default HAC truncation floor(4*(T/100)^(2/9)).
int newey_west_default_lag(Eigen::Index t_eff);

/// Newey-West covariance of OLS coefficients for one equation: Bartlett
/// kernel over the score vectors x_t * e_t up to `truncation` lags
/// (default lag when omitted).  x is t x p, resid length t.
Eigen::MatrixXd newey_west_covariance(const Eigen::MatrixXd& x,
                                      const Eigen::VectorXd& resid,
                                      std::optional<int> truncation = std::nullopt);

/// Joint parameter-constancy statistic over all equations of a fit.
///
/// Per equation the score vector stacks x_t*e_t with e_t^2 - sigma^2, so the
/// test covers every coefficient and the error variance; per-equation
/// statistics tr(V^-1 sum_t S_t S_t') / T are summed across equations.
/// Throws ConditioningError when a score outer-product matrix V is
/// numerically singular.
double hansen_lc(const Eigen::MatrixXd& x, const Eigen::MatrixXd& residuals);

/// Asymptotic critical value of the constancy statistic for `param_count`
/// accumulated score dimensions (supported 1..20) at level 0.05 or 0.01.
double hansen_lc_critical_value(int param_count, double level);

/// Lag order minimising the Schwarz criterion of the unrestricted system
/// over k = 1..max_k, with the estimation sample held fixed at the largest
/// candidate so criteria are comparable.
int select_lag_bic(const DiffPanel& diffs, const LogPanel& levels, int max_k);

/// Bivariate annual-series error-correction analysis (levels are logged
/// inside).  Both series must share the same first year and length >= 20
/// (AlignmentError / InsufficientDataError); values must be strictly
/// positive (DomainError).  Uses one lagged difference.
struct BivariateVecm {
  CointegrationResult coint;
  VecmFit fit;
  std::vector<std::string> names;
  int first_year = 0;
};

BivariateVecm fit_vecm_bivariate(const AnnualSeries& x, const AnnualSeries& y);

}  // namespace tvvecm
