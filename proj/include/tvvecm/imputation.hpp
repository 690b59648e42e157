#pragma once

#include <Eigen/Dense>

namespace tvvecm {

/// Maximum-likelihood fit of a structural time-series model used to fill
/// missing observations in one column:
///
///   y_t   = level_t + seasonal_t + obs noise,   obs noise   ~ N(0, obs_var)
///   level_t = level_{t-1} + level innovation,   innovation  ~ N(0, level_var)
///   seasonal_t = -(seasonal_{t-1} + ... + seasonal_{t-period+1}) + seasonal
///                innovation ~ N(0, seasonal_var)
///
/// The three variances are estimated by maximising the prediction-error
/// likelihood (observation variance concentrated out, the two ratios searched
/// on a log scale with Nelder-Mead), then a fixed-interval smoother produces
/// the conditional mean of y at every index.  With period == 1 the seasonal
/// component is dropped and only the local level remains.
struct SeasonalSmootherFit {
  double level_var = 0.0;
  double seasonal_var = 0.0;
  double obs_var = 0.0;
  double log_likelihood = 0.0;
  Eigen::VectorXd smoothed;  ///< E[level_t + seasonal_t | all observed y]
};

/// Fits the model to one series.  `observed` flags which entries of y carry
/// data (masked entries of y are ignored and may hold NaN).
SeasonalSmootherFit fit_seasonal_smoother(const Eigen::VectorXd& y,
                                          const Eigen::Array<bool, Eigen::Dynamic, 1>& observed,
                                          int period);

}  // namespace tvvecm
