#include "tvvecm/vecm.hpp"

#include <cmath>

#include "tvvecm/design.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/stats.hpp"

namespace tvvecm {

namespace {

// Asymptotic critical values of the cumulative-score constancy statistic,
// indexed by the number of accumulated score dimensions (1..20).
constexpr int kLcMaxParams = 20;
constexpr double kLcCv5[kLcMaxParams] = {
    0.470, 0.749, 1.01, 1.24, 1.47, 1.68, 1.90, 2.11, 2.32, 2.54,
    2.75,  2.96,  3.15, 3.34, 3.54, 3.75, 3.95, 4.14, 4.33, 4.52};
constexpr double kLcCv1[kLcMaxParams] = {
    0.748, 1.07, 1.35, 1.60, 1.88, 2.12, 2.35, 2.59, 2.82, 3.05,
    3.27,  3.51, 3.69, 3.90, 4.07, 4.30, 4.51, 4.73, 4.92, 5.13};

double adjusted_r2(const Eigen::VectorXd& y, double ssr, Eigen::Index params) {
  const auto t = y.size();
  const double mean = y.mean();
  const double sst = (y.array() - mean).square().sum();
  if (sst <= 0.0) throw DomainError("response has zero variance; adjusted R^2 undefined");
  const double dof_model = static_cast<double>(t - params);
  if (dof_model <= 0.0) throw InsufficientDataError("no residual degrees of freedom");
  return 1.0 - (ssr / dof_model) / (sst / static_cast<double>(t - 1));
}

}  // namespace

int newey_west_default_lag(Eigen::Index t_eff) {
  return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(t_eff) / 100.0, 2.0 / 9.0)));
}

Eigen::MatrixXd newey_west_covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& resid,
                                      std::optional<int> truncation) {
  const auto t = x.rows();
  if (resid.size() != t) throw ShapeError("residual length does not match design rows");
  const int lag = truncation.value_or(newey_west_default_lag(t));
  if (lag < 0) throw ParameterError("HAC truncation must be >= 0");
  if (lag >= t) throw ParameterError("HAC truncation must be below the sample size");

  // long-run covariance of the scores x_t * e_t under a Bartlett kernel
  const Eigen::MatrixXd scores = x.array().colwise() * resid.array();
  Eigen::MatrixXd omega = scores.transpose() * scores;
  for (int l = 1; l <= lag; ++l) {
    const double w = 1.0 - static_cast<double>(l) / static_cast<double>(lag + 1);
    const Eigen::MatrixXd cross =
        scores.bottomRows(t - l).transpose() * scores.topRows(t - l);
    omega += w * (cross + cross.transpose());
  }

  const Eigen::MatrixXd xtx = x.transpose() * x;
  const Eigen::MatrixXd bread =
      xtx.ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
  return bread * omega * bread;
}

double hansen_lc(const Eigen::MatrixXd& x, const Eigen::MatrixXd& residuals) {
  const auto t = x.rows();
  if (residuals.rows() != t) throw ShapeError("residual rows do not match design rows");
  const auto q = x.cols() + 1;  // coefficients plus the error variance
  double total = 0.0;
  for (Eigen::Index eq = 0; eq < residuals.cols(); ++eq) {
    const Eigen::VectorXd e = residuals.col(eq);
    const double sigma2 = e.squaredNorm() / static_cast<double>(t);

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd cumulative_outer = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd running_sum = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd f(q);
    for (Eigen::Index i = 0; i < t; ++i) {
      f.head(q - 1) = x.row(i).transpose() * e[i];
      f[q - 1] = e[i] * e[i] - sigma2;
      v += f * f.transpose();
      running_sum += f;
      cumulative_outer += running_sum * running_sum.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    if (eig.eigenvalues().minCoeff() <= 1e-13 * eig.eigenvalues().maxCoeff()) {
      throw ConditioningError("score outer-product matrix is numerically singular in equation " +
                              std::to_string(eq));
    }
    total += v.ldlt().solve(cumulative_outer).trace() / static_cast<double>(t);
  }
  return total;
}

double hansen_lc_critical_value(int param_count, double level) {
  if (param_count < 1 || param_count > kLcMaxParams) {
    throw ParameterError("constancy critical values cover 1.." + std::to_string(kLcMaxParams) +
                         " score dimensions");
  }
  if (level == 0.05) return kLcCv5[param_count - 1];
  if (level == 0.01) return kLcCv1[param_count - 1];
  throw ParameterError("supported levels are 0.05 and 0.01");
}

VecmFit fit_vecm(const DiffPanel& diffs, const LogPanel& levels, int k,
                 const std::optional<Eigen::MatrixXd>& beta) {
  const auto n = levels.cols();
  Eigen::Index longrun_cols = n + 1;
  if (beta) {
    if (beta->rows() != n + 1) {
      throw ShapeError("beta must have one row per series plus the constant row");
    }
    longrun_cols = beta->cols();
  }
  const Eigen::Index p = n * (k - 1) + longrun_cols;
  const VecmDesign d = build_vecm_design(diffs, levels, k, p + 10);

  Eigen::MatrixXd x(d.t_eff, p);
  std::vector<std::string> names = d.z1_names;
  x.leftCols(d.z1.cols()) = d.z1;
  if (beta) {
    x.rightCols(longrun_cols) = d.zk * (*beta);
    for (Eigen::Index j = 0; j < longrun_cols; ++j) {
      names.push_back("ec" + std::to_string(j + 1));
    }
  } else {
    x.rightCols(longrun_cols) = d.zk;
    names.insert(names.end(), d.zk_names.begin(), d.zk_names.end());
  }

  VecmFit fit;
  fit.lag_order = k;
  fit.effective_sample = d.t_eff;
  fit.first_month = d.first_month;
  fit.regressor_names = names;
  fit.beta_supplied = beta.has_value();
  fit.gamma.resize(n, d.z1.cols());
  fit.gamma_se.resize(n, d.z1.cols());
  fit.residuals.resize(d.t_eff, n);
  fit.fitted.resize(d.t_eff, n);
  fit.r2_adj.resize(n);
  Eigen::MatrixXd longrun_coef(n, longrun_cols);
  Eigen::MatrixXd longrun_se(n, longrun_cols);
  std::vector<Eigen::MatrixXd> coef_cov(static_cast<std::size_t>(n));

  for (Eigen::Index eq = 0; eq < n; ++eq) {
    fit.equation_names.push_back("d" + levels.names[static_cast<std::size_t>(eq)]);
    const Eigen::VectorXd y = d.z0.col(eq);
    const OlsFit eq_fit = ols(x, y, names);
    fit.residuals.col(eq) = eq_fit.residuals;
    fit.fitted.col(eq) = y - eq_fit.residuals;
    fit.gamma.row(eq) = eq_fit.coef.head(d.z1.cols());
    longrun_coef.row(eq) = eq_fit.coef.tail(longrun_cols);
    fit.r2_adj[eq] = adjusted_r2(y, eq_fit.ssr, p);

    const Eigen::MatrixXd cov = newey_west_covariance(x, eq_fit.residuals);
    coef_cov[static_cast<std::size_t>(eq)] = cov;
    fit.gamma_se.row(eq) = cov.diagonal().head(d.z1.cols()).cwiseSqrt();
    longrun_se.row(eq) = cov.diagonal().tail(longrun_cols).cwiseSqrt();
  }

  if (beta) {
    fit.beta = *beta;
    fit.alpha = longrun_coef;
    fit.alpha_se = longrun_se;
    fit.pi = fit.alpha * fit.beta.transpose();
    // s.e. of pi entries: each is a fixed linear combination (a row of beta)
    // of that equation's loading estimates
    fit.pi_se.resize(n, n + 1);
    for (Eigen::Index eq = 0; eq < n; ++eq) {
      const auto& cov = coef_cov[static_cast<std::size_t>(eq)];
      const Eigen::MatrixXd loading_cov =
          cov.bottomRightCorner(longrun_cols, longrun_cols);
      for (Eigen::Index row = 0; row < n + 1; ++row) {
        const Eigen::VectorXd weights = fit.beta.row(row).transpose();
        fit.pi_se(eq, row) = std::sqrt(weights.dot(loading_cov * weights));
      }
    }
  } else {
    fit.pi = longrun_coef;
    fit.pi_se = longrun_se;
    // exact full-rank decomposition of pi through its thin SVD
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(fit.pi,
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    fit.alpha = svd.matrixU() * svd.singularValues().asDiagonal();
    fit.beta = svd.matrixV();
    fit.alpha_se.resize(0, 0);
  }

  fit.lc_stat = hansen_lc(x, fit.residuals);
  fit.lc_param_count = static_cast<int>(n * (p + 1));
  return fit;
}

int select_lag_bic(const DiffPanel& diffs, const LogPanel& levels, int max_k) {
  if (max_k < 1) throw ParameterError("lag search bound must be >= 1");
  const auto n = levels.cols();
  const Eigen::Index p_largest = n * (max_k - 1) + n + 1;
  build_vecm_design(diffs, levels, max_k, p_largest + 10);  // data sufficiency at the bound

  int best_k = 1;
  double best_bic = 0.0;
  for (int k = 1; k <= max_k; ++k) {
    VecmDesign d = build_vecm_design(diffs, levels, k, 1);
    // drop leading rows so every candidate scores the same response rows
    const Eigen::Index drop = d.t_eff - (levels.rows() - max_k);
    const Eigen::Index rows = d.t_eff - drop;
    Eigen::MatrixXd x(rows, d.z1.cols() + d.zk.cols());
    x.leftCols(d.z1.cols()) = d.z1.bottomRows(rows);
    x.rightCols(d.zk.cols()) = d.zk.bottomRows(rows);
    const Eigen::MatrixXd y = d.z0.bottomRows(rows);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) {
      throw CollinearityError("rank-deficient design at lag order " + std::to_string(k));
    }
    const Eigen::MatrixXd resid = y - x * qr.solve(y);
    const Eigen::MatrixXd sigma = resid.transpose() * resid / static_cast<double>(rows);
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw CollinearityError("singular residual covariance at lag order " + std::to_string(k));
    }
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
    }
    const double params = static_cast<double>(n * x.cols());
    const double bic =
        log_det + std::log(static_cast<double>(rows)) / static_cast<double>(rows) * params;
    if (k == 1 || bic < best_bic) {
      best_bic = bic;
      best_k = k;
    }
  }
  return best_k;
}

BivariateVecm fit_vecm_bivariate(const AnnualSeries& x, const AnnualSeries& y) {
  if (x.first_year != y.first_year || x.values.size() != y.values.size()) {
    throw AlignmentError("annual series must cover the same years");
  }
  if (x.values.size() < 20) {
    throw InsufficientDataError("bivariate analysis needs at least 20 annual observations");
  }
  if ((x.values.array() <= 0).any() || (y.values.array() <= 0).any()) {
    throw DomainError("annual series must be strictly positive for the log transform");
  }

  // the estimator only needs a shared integer time axis; one row per year
  LogPanel logs;
  logs.names = {x.name.empty() ? "x" : x.name, y.name.empty() ? "y" : y.name};
  logs.start = YearMonth{x.first_year, 1};
  logs.values.resize(x.values.size(), 2);
  logs.values.col(0) = x.values.unaryExpr([](double v) { return std::log(v); });
  logs.values.col(1) = y.values.unaryExpr([](double v) { return std::log(v); });
  const DiffPanel diffs = difference(logs);

  BivariateVecm out;
  out.names = logs.names;
  out.first_year = x.first_year;
  // one lagged difference plus the restricted-constant long-run term; the
  // coefficient panel always reports the leading long-run relation
  out.coint = johansen(diffs, logs, 2, 1);
  out.fit = fit_vecm(diffs, logs, 2, out.coint.beta);
  return out;
}

}  // namespace tvvecm
