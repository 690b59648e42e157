#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace tvvecm {

/// Deterministic component removed by the GLS step.
enum class Detrend {
  kConstant,       ///< local-to-unity coefficient -7.0, mean only
  kConstantTrend,  ///< local-to-unity coefficient -13.5, mean and linear trend
};

/// Lag-length selection rule for the augmented regression.
enum class LagCriterion {
  kModifiedAic,  ///< modified AIC (penalty 2)
  kModifiedBic,  ///< modified BIC (penalty ln T), the default
};

std::string to_string(Detrend d);
std::string to_string(LagCriterion c);
Detrend detrend_from_string(const std::string& s);
LagCriterion lag_criterion_from_string(const std::string& s);

/// Result of the GLS-detrended augmented Dickey-Fuller test.
struct AdfGlsResult {
  double statistic = 0.0;    ///< t-ratio on the lagged detrended level
  int lags = 0;              ///< selected augmentation lag count
  double phi_hat = 0.0;      ///< sum of AR coefficients in levels (1 + that t-ratio's slope)
  Detrend detrend = Detrend::kConstantTrend;
  LagCriterion criterion = LagCriterion::kModifiedBic;
  double critical_value_1pct = 0.0;
  bool reject_1pct = false;  ///< statistic < 1% critical value
};

/// Asymptotic critical value of the test statistic.  `level` is one of 0.01,
/// 0.05, 0.10.  The 1% value for the trend case is -3.42.
double adf_gls_critical_value(Detrend detrend, double level);

/// GLS-detrended ADF unit-root test.
///
/// Pipeline: quasi-difference the series at the local alternative implied by
/// `detrend`, regress on the quasi-differenced deterministics to detrend,
/// then run the augmented Dickey-Fuller regression (no deterministics) on the
/// detrended series.  The augmentation lag is chosen by the modified
/// information criterion over 0..max_lags on a common estimation sample; the
/// selection regressions use the OLS-detrended series (GLS detrending leaves
/// a mean offset under stationary alternatives that biases the criterion
/// toward large lags and destroys power), while the reported regression uses
/// the GLS-detrended series over the full sample available at the chosen lag.
///
/// `max_lags` defaults to floor(12*(T/100)^(1/4)).  Throws
/// InsufficientDataError when fewer than max_lags + 25 observations are
/// supplied and DomainError when the series is constant (the test statistic
/// is undefined).
AdfGlsResult adf_gls(const Eigen::VectorXd& series, Detrend detrend,
                     LagCriterion criterion = LagCriterion::kModifiedBic,
                     std::optional<int> max_lags = std::nullopt);

}  // namespace tvvecm
