#pragma once

// Independent reference implementations used to cross-check the production
// numerics.  Everything here is written the slow, obvious way on purpose:
// dense solves, textbook double sums, power iteration.  Do not "optimise"
// these into calls back into the library.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracles {

/// Dense solve of the block-tridiagonal system the penalized smoother
/// assembles: diag[t] on the diagonal, sub[t] below it (and its transpose
/// above).  LDLT on the full matrix.
inline Eigen::VectorXd dense_block_tridiagonal_solve(
    const std::vector<Eigen::MatrixXd>& diag, const std::vector<Eigen::MatrixXd>& sub,
    const Eigen::VectorXd& rhs) {
  const auto blocks = static_cast<Eigen::Index>(diag.size());
  const Eigen::Index p = diag.empty() ? 0 : diag.front().rows();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(blocks * p, blocks * p);
  for (Eigen::Index t = 0; t < blocks; ++t) {
    full.block(t * p, t * p, p, p) = diag[static_cast<std::size_t>(t)];
    if (t + 1 < blocks) {
      full.block((t + 1) * p, t * p, p, p) = sub[static_cast<std::size_t>(t)];
      full.block(t * p, (t + 1) * p, p, p) = sub[static_cast<std::size_t>(t)].transpose();
    }
  }
  return full.ldlt().solve(rhs);
}

/// Largest singular value via Jacobi SVD.
inline double svd_sigma_max(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

/// Largest singular value via power iteration on a'a, run to stationarity.
inline double power_sigma_max(const Eigen::MatrixXd& a, int max_iterations = 2000) {
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(gram.rows());
  v.normalize();
  double value = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double delta = (next - v).norm();
    v = next;
    value = norm;
    if (delta < 1e-15) break;
  }
  return std::sqrt(value);
}

/// White-noise (HC0) sandwich covariance of OLS coefficients.
inline Eigen::MatrixXd hc0_covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& u) {
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    meat += u(t) * u(t) * x.row(t).transpose() * x.row(t);
  }
  return xtx_inv * meat * xtx_inv;
}

/// Textbook Bartlett-kernel HAC sandwich: sum over lags of weighted score
/// autocovariances, written as the O(T*L) double sum.
inline Eigen::MatrixXd newey_west_covariance(const Eigen::MatrixXd& x,
                                             const Eigen::VectorXd& u, int lags) {
  const Eigen::Index t_obs = x.rows();
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index t = 0; t < t_obs; ++t) {
    omega += u(t) * u(t) * x.row(t).transpose() * x.row(t);
  }
  for (int lag = 1; lag <= lags; ++lag) {
    const double w = 1.0 - static_cast<double>(lag) / (lags + 1.0);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index t = lag; t < t_obs; ++t) {
      cov += u(t) * u(t - lag) * x.row(t).transpose() * x.row(t - lag);
    }
    omega += w * (cov + cov.transpose());
  }
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
  return xtx_inv * omega * xtx_inv;
}

/// Largest principal angle (radians) between the column spaces of a and b.
inline double largest_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a)
                                 .householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b)
                                 .householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.transpose() * qb);
  const double smallest_cosine =
      std::min(1.0, std::max(-1.0, svd.singularValues().minCoeff()));
  return std::acos(smallest_cosine);
}

/// Type-7 quantile computed independently of the library.
inline double quantile_type7(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace oracles
