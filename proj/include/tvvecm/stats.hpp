#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tvvecm {

double mean(const Eigen::VectorXd& x);
/// Sample variance with the n-1 divisor.
double variance(const Eigen::VectorXd& x);
double stddev(const Eigen::VectorXd& x);

/// Linear-interpolation empirical quantile (the common "type 7" rule):
/// position q*(n-1) between order statistics.  q must lie in [0, 1].
double quantile(std::vector<double> values, double q);

/// Ordinary least squares via column-pivoted Householder QR.
///
/// Solves y = X b + e and keeps the pieces downstream covariance estimators
/// need.  Throws CollinearityError when X is numerically rank deficient; the
/// message names the offending columns (by the supplied labels when given,
/// otherwise by index).
struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd xtx_inverse;  // (X'X)^-1
  double ssr = 0.0;
};

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
           const std::vector<std::string>& column_names = {});

}  // namespace tvvecm
