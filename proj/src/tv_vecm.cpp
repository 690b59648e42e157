#include "tvvecm/tv_vecm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tvvecm/banded.hpp"
#include "tvvecm/design.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/parallel.hpp"
#include "tvvecm/random.hpp"
#include "tvvecm/stats.hpp"

namespace tvvecm {

namespace {

struct TvDesign {
  Eigen::MatrixXd x;  ///< t_eff x p stacked regressors, error correction last
  Eigen::MatrixXd y;  ///< t_eff x n current differences
  std::vector<std::string> column_names;
  Eigen::Index n = 0;
  Eigen::Index r = 0;
  YearMonth first_month;
};

// Shared front end of the time-varying fit and its likelihood profile: the
// regressor block [lagged differences | error-correction scores] with beta
// held fixed, plus the feasibility check.  The penalized problem has a unique
// solution exactly when the pooled (time-invariant) design has full column
// rank, so rank deficiency is reported up front against the named columns.
TvDesign build_tv_design(const DiffPanel& diffs, const LogPanel& levels, int k,
                         const Eigen::MatrixXd& beta) {
  const auto n = levels.values.cols();
  if (beta.rows() != n + 1) {
    throw ShapeError("cointegration matrix must have " + std::to_string(n + 1) +
                     " rows, got " + std::to_string(beta.rows()));
  }
  const auto r = beta.cols();
  const auto p = n * (k - 1) + r;
  const auto design = build_vecm_design(diffs, levels, k, p + 10);

  TvDesign out;
  out.n = n;
  out.r = r;
  out.first_month = design.first_month;
  out.y = design.z0;
  out.x.resize(design.t_eff, p);
  out.x.leftCols(design.z1.cols()) = design.z1;
  out.x.rightCols(r) = design.zk * beta;
  out.column_names = design.z1_names;
  for (Eigen::Index j = 0; j < r; ++j) {
    out.column_names.push_back("ec" + std::to_string(j + 1));
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(out.x);
  qr.setThreshold(1e-10);
  if (qr.rank() < out.x.cols()) {
    std::string offenders;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < out.x.cols(); ++i) {
      if (!offenders.empty()) offenders += ", ";
      offenders += out.column_names[static_cast<std::size_t>(perm[i])];
    }
    throw CollinearityError("rank-deficient regressor matrix (" + offenders + ")");
  }
  return out;
}

// Gaussian log likelihood of one equation under the random-walk-coefficient
// model with observation variance concentrated out, evaluated by the Kalman
// prediction-error decomposition.  State innovations have relative variance
// 1/lambda.  The first p prediction errors initialize the diffuse state and
// are excluded, so the comparison across lambda values uses a common sample.
double profile_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda) {
  const auto t_eff = x.rows();
  const auto p = x.cols();
  const double scale = std::max(variance(y), 1e-12);
  const double q = 1.0 / lambda;

  Eigen::VectorXd state = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd cov = 1e7 * scale * Eigen::MatrixXd::Identity(p, p);

  double sum_v2f = 0.0;
  double sum_logf = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index t = 0; t < t_eff; ++t) {
    const Eigen::VectorXd z = x.row(t).transpose();
    const Eigen::VectorXd pz = cov * z;
    const double f = z.dot(pz) + 1.0;
    const double v = y[t] - z.dot(state);
    state += pz * (v / f);
    cov -= (pz * pz.transpose()) / f;
    cov = ((cov + cov.transpose()) * 0.5).eval();
    cov.diagonal().array() += q;
    if (t >= p) {
      sum_v2f += v * v / f;
      sum_logf += std::log(f);
      ++used;
    }
  }
  if (used <= 0) throw InsufficientDataError("no observations beyond the diffuse start");
  const double sigma2 = std::max(sum_v2f / static_cast<double>(used), 1e-12 * scale);
  return -0.5 * (static_cast<double>(used) * (std::log(2.0 * M_PI) + 1.0 + std::log(sigma2)) +
                 sum_logf);
}

}  // namespace

TvVecmFit fit_tv_vecm(const DiffPanel& diffs, const LogPanel& levels, int k,
                      const Eigen::MatrixXd& beta, double smoothing_ratio) {
  if (!(smoothing_ratio > 0.0)) {
    throw ParameterError("smoothing ratio must be positive");
  }
  const auto design = build_tv_design(diffs, levels, k, beta);
  const auto t_eff = design.x.rows();
  const auto p = design.x.cols();
  const auto n = design.n;
  const auto r = design.r;
  const double lambda = smoothing_ratio;

  // One normal-equations matrix serves every equation: block t couples
  // theta_t to its neighbors through the penalty, and only the right-hand
  // side depends on the equation.
  std::vector<Eigen::MatrixXd> diag(static_cast<std::size_t>(t_eff));
  std::vector<Eigen::MatrixXd> sub(static_cast<std::size_t>(t_eff) - 1,
                                   -lambda * Eigen::MatrixXd::Identity(p, p));
  for (Eigen::Index t = 0; t < t_eff; ++t) {
    const Eigen::VectorXd xt = design.x.row(t).transpose();
    Eigen::MatrixXd block = xt * xt.transpose();
    const double neighbors = (t > 0 ? 1.0 : 0.0) + (t + 1 < t_eff ? 1.0 : 0.0);
    block.diagonal().array() += lambda * neighbors;
    diag[static_cast<std::size_t>(t)] = block;
  }
  BlockTridiagonalCholesky chol;
  chol.factor(diag, sub);

  TvVecmFit fit;
  fit.beta = beta;
  fit.smoothing_ratio = smoothing_ratio;
  fit.lag_order = k;
  fit.effective_sample = t_eff;
  fit.first_month = design.first_month;
  fit.gamma_path.assign(static_cast<std::size_t>(t_eff), Eigen::MatrixXd(n, p - r));
  fit.alpha_path.assign(static_cast<std::size_t>(t_eff), Eigen::MatrixXd(n, r));
  fit.residual_path.resize(t_eff, n);

  Eigen::VectorXd rhs(t_eff * p);
  for (Eigen::Index eq = 0; eq < n; ++eq) {
    // Solve for the deviation from the pooled time-invariant coefficients.
    // The penalty annihilates a constant path exactly, so this changes
    // nothing mathematically -- but it keeps the right-hand side at data
    // scale, which matters when lambda dwarfs the data blocks: at extreme
    // smoothing weights the deviation is tiny and a raw solve of the
    // original system cannot resolve it in double precision.
    Eigen::VectorXd center = Eigen::VectorXd::Zero(p);
    try {
      center = ols(design.x, design.y.col(eq)).coef;
    } catch (const CollinearityError&) {
      // pooled design is rank-deficient; fall back to an uncentered solve
    }
    for (Eigen::Index t = 0; t < t_eff; ++t) {
      const double centered = design.y(t, eq) - design.x.row(t).dot(center);
      rhs.segment(t * p, p) = design.x.row(t).transpose() * centered;
    }
    const Eigen::VectorXd delta = chol.solve_refined(rhs, 24);
    for (Eigen::Index t = 0; t < t_eff; ++t) {
      const Eigen::VectorXd theta_t = center + delta.segment(t * p, p);
      fit.gamma_path[static_cast<std::size_t>(t)].row(eq) = theta_t.head(p - r).transpose();
      fit.alpha_path[static_cast<std::size_t>(t)].row(eq) = theta_t.tail(r).transpose();
      fit.residual_path(t, eq) = design.y(t, eq) - design.x.row(t).dot(theta_t);
    }
  }
  return fit;
}

double profile_smoothing_ratio(const DiffPanel& diffs, const LogPanel& levels, int k,
                               const Eigen::MatrixXd& beta, double lambda_min,
                               double lambda_max, int grid_points) {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) {
    throw ParameterError("smoothing grid bounds must satisfy 0 < min < max");
  }
  if (grid_points < 2) throw ParameterError("smoothing grid needs at least two points");
  const auto design = build_tv_design(diffs, levels, k, beta);

  double best_lambda = lambda_min;
  double best_loglik = -std::numeric_limits<double>::infinity();
  const double log_lo = std::log(lambda_min);
  const double log_hi = std::log(lambda_max);
  for (int g = 0; g < grid_points; ++g) {
    const double frac = static_cast<double>(g) / static_cast<double>(grid_points - 1);
    const double lambda = std::exp(log_lo + frac * (log_hi - log_lo));
    double total = 0.0;
    for (Eigen::Index eq = 0; eq < design.n; ++eq) {
      total += profile_loglik(design.x, design.y.col(eq), lambda);
    }
    if (total > best_loglik) {
      best_loglik = total;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

IntegrationSpeedPath integration_speed(const TvVecmFit& fit) {
  const auto t_eff = static_cast<Eigen::Index>(fit.alpha_path.size());
  IntegrationSpeedPath path;
  path.first_month = fit.first_month;
  path.zeta.resize(t_eff);
  for (Eigen::Index t = 0; t < t_eff; ++t) {
    const Eigen::MatrixXd& a = fit.alpha_path[static_cast<std::size_t>(t)];
    if (a.size() == 0) {
      path.zeta[t] = 0.0;
      continue;
    }
    // the largest singular value via the smaller of the two Gram matrices
    const Eigen::MatrixXd gram =
        a.rows() <= a.cols() ? Eigen::MatrixXd(a * a.transpose())
                             : Eigen::MatrixXd(a.transpose() * a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
      throw ConditioningError("eigendecomposition of the loading Gram matrix failed");
    }
    path.zeta[t] = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  if (t_eff > 1) {
    path.acceleration = path.zeta.tail(t_eff - 1) - path.zeta.head(t_eff - 1);
  } else {
    path.acceleration.resize(0);
  }
  return path;
}

IntegrationSpeedPath bootstrap_bands(const TvVecmFit& fit, const DiffPanel& diffs,
                                     const LogPanel& levels, int replications,
                                     double coverage, std::uint64_t seed,
                                     unsigned threads) {
  if (replications < 100) {
    throw ParameterError("bootstrap needs at least 100 replications");
  }
  if (!(coverage > 0.0) || !(coverage < 1.0)) {
    throw ParameterError("band coverage must lie strictly between 0 and 1");
  }
  const auto t_eff = fit.effective_sample;
  const auto n = static_cast<Eigen::Index>(levels.values.cols());
  const int k = fit.lag_order;
  if (levels.values.rows() != t_eff + k || diffs.values.rows() + 1 != levels.values.rows()) {
    throw AlignmentError("panel does not match the fitted sample");
  }

  // centered one-step residuals are the innovation pool
  Eigen::MatrixXd pool = fit.residual_path;
  pool.rowwise() -= pool.colwise().mean();

  IntegrationSpeedPath point = integration_speed(fit);

  Eigen::MatrixXd zeta_reps(replications, t_eff);
  parallel_for(
      static_cast<std::size_t>(replications),
      [&](std::size_t rep) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));

        // regenerate the log panel through the fitted time-varying system,
        // keeping the original first k levels as initial conditions
        Eigen::MatrixXd logs(t_eff + k, n);
        logs.topRows(k) = levels.values.topRows(k);
        for (Eigen::Index j = 0; j < t_eff; ++j) {
          const auto t = k + j;
          const Eigen::MatrixXd& gamma = fit.gamma_path[static_cast<std::size_t>(j)];
          const Eigen::MatrixXd& alpha = fit.alpha_path[static_cast<std::size_t>(j)];

          Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
          for (int lag = 1; lag < k; ++lag) {
            const Eigen::VectorXd lagged_diff =
                (logs.row(t - lag) - logs.row(t - lag - 1)).transpose();
            delta += gamma.middleCols(static_cast<Eigen::Index>(lag - 1) * n, n) * lagged_diff;
          }
          if (alpha.cols() > 0) {
            Eigen::VectorXd zk(n + 1);
            zk[0] = 1.0;
            zk.tail(n) = logs.row(t - k).transpose();
            delta += alpha * (fit.beta.transpose() * zk);
          }
          const auto draw = rng.uniform_index(static_cast<std::size_t>(t_eff));
          delta += pool.row(static_cast<Eigen::Index>(draw)).transpose();

          logs.row(t) = logs.row(t - 1) + delta.transpose();
          if (!logs.row(t).allFinite() || logs.row(t).cwiseAbs().maxCoeff() > 1e6) {
            throw InstabilityError("bootstrap replication " + std::to_string(rep) +
                                   " diverged while regenerating the panel");
          }
        }

        LogPanel replica;
        replica.names = levels.names;
        replica.start = levels.start;
        replica.values = logs;
        const DiffPanel replica_diffs = difference(replica);
        const TvVecmFit refit =
            fit_tv_vecm(replica_diffs, replica, k, fit.beta, fit.smoothing_ratio);
        zeta_reps.row(static_cast<Eigen::Index>(rep)) =
            integration_speed(refit).zeta.transpose();
      },
      threads);

  point.coverage = coverage;
  point.lower.resize(t_eff);
  point.upper.resize(t_eff);
  std::vector<double> column(static_cast<std::size_t>(replications));
  for (Eigen::Index t = 0; t < t_eff; ++t) {
    for (int rep = 0; rep < replications; ++rep) {
      column[static_cast<std::size_t>(rep)] = zeta_reps(rep, t);
    }
    point.lower[t] = quantile(column, (1.0 - coverage) / 2.0);
    point.upper[t] = quantile(column, (1.0 + coverage) / 2.0);
  }
  return point;
}

}  // namespace tvvecm
