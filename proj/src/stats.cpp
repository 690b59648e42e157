#include "tvvecm/stats.hpp"

#include <algorithm>
#include <cmath>

#include "tvvecm/errors.hpp"

namespace tvvecm {

double mean(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw InsufficientDataError("mean of an empty series");
  return x.mean();
}

double variance(const Eigen::VectorXd& x) {
  if (x.size() < 2) throw InsufficientDataError("variance needs at least 2 values");
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

double stddev(const Eigen::VectorXd& x) { return std::sqrt(variance(x)); }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InsufficientDataError("quantile of an empty sample");
  if (q < 0.0 || q > 1.0) throw ParameterError("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
           const std::vector<std::string>& column_names) {
  if (x.rows() != y.size()) throw ShapeError("regressor rows do not match response length");
  if (x.rows() < x.cols()) {
    throw InsufficientDataError("fewer observations than regressors");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) {
    // pivots beyond the numerical rank identify the dependent columns
    std::string offenders;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < x.cols(); ++i) {
      if (!offenders.empty()) offenders += ", ";
      const auto col = static_cast<std::size_t>(perm[i]);
      offenders += col < column_names.size() ? column_names[col]
                                             : "column " + std::to_string(col);
    }
    throw CollinearityError("rank-deficient regressor matrix (" + offenders + ")");
  }

  OlsFit fit;
  fit.coef = qr.solve(y);
  fit.residuals = y - x * fit.coef;
  fit.ssr = fit.residuals.squaredNorm();
  const Eigen::MatrixXd xtx = x.transpose() * x;
  fit.xtx_inverse = xtx.ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
  return fit;
}

}  // namespace tvvecm
