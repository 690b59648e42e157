#include "tvvecm/johansen.hpp"

#include <cmath>

#include "tvvecm/design.hpp"
#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

// Restricted-constant critical values indexed by common trends m = 1..4,
// from the standard published table for this deterministic case.
constexpr int kMaxCommonTrends = 4;
constexpr double kTraceCv5[kMaxCommonTrends] = {9.24, 19.96, 34.91, 53.12};
constexpr double kTraceCv1[kMaxCommonTrends] = {12.97, 24.60, 41.07, 60.16};
constexpr double kMaxEigCv5[kMaxCommonTrends] = {9.24, 15.67, 22.00, 28.14};
constexpr double kMaxEigCv1[kMaxCommonTrends] = {12.97, 20.20, 26.81, 33.24};

void require_positive_definite(const Eigen::MatrixXd& s, const char* label) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const double max_ev = eig.eigenvalues().maxCoeff();
  const double min_ev = eig.eigenvalues().minCoeff();
  if (!(max_ev > 0.0) || min_ev <= 1e-12 * max_ev) {
    throw CollinearityError(std::string(label) +
                            " moment matrix is numerically singular; the panel likely "
                            "contains linearly dependent or constant series");
  }
}

// Residuals of block after projecting out z1 (no-op when z1 has no columns).
Eigen::MatrixXd concentrate(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& block) {
  if (z1.cols() == 0) return block;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z1);
  return block - z1 * qr.solve(block);
}

}  // namespace

double johansen_critical_value(RankStatistic stat, double level, int common_trends) {
  if (common_trends < 1 || common_trends > kMaxCommonTrends) {
    throw ParameterError("critical values cover 1.." + std::to_string(kMaxCommonTrends) +
                         " common trends, got " + std::to_string(common_trends));
  }
  const int idx = common_trends - 1;
  if (level == 0.01) return stat == RankStatistic::kTrace ? kTraceCv1[idx] : kMaxEigCv1[idx];
  if (level == 0.05) return stat == RankStatistic::kTrace ? kTraceCv5[idx] : kMaxEigCv5[idx];
  throw ParameterError("supported levels are 0.01 and 0.05");
}

CointegrationResult johansen(const DiffPanel& diffs, const LogPanel& levels, int k,
                             std::optional<int> rank) {
  const auto n = levels.cols();
  if (n < 2) throw ParameterError("rank analysis needs at least 2 series");
  if (n > kMaxCommonTrends) {
    throw ParameterError("critical values embedded for at most " +
                         std::to_string(kMaxCommonTrends) + " series");
  }
  const VecmDesign d = build_vecm_design(diffs, levels, k, 10 * n);
  const auto t_eff = static_cast<double>(d.t_eff);

  const Eigen::MatrixXd r0 = concentrate(d.z1, d.z0);
  const Eigen::MatrixXd rk = concentrate(d.z1, d.zk);
  const Eigen::MatrixXd s00 = r0.transpose() * r0 / t_eff;
  const Eigen::MatrixXd s0k = r0.transpose() * rk / t_eff;
  const Eigen::MatrixXd skk = rk.transpose() * rk / t_eff;
  require_positive_definite(s00, "short-run");
  require_positive_definite(skk, "long-run");

  // squared canonical correlations: eigenvalues of the pencil
  // (S_k0 S_00^-1 S_0k, S_kk), symmetrised through the Cholesky factor of S_kk
  const Eigen::MatrixXd m = s0k.transpose() * s00.llt().solve(s0k);
  const Eigen::LLT<Eigen::MatrixXd> skk_llt(skk);
  const Eigen::MatrixXd l_inv_m =
      skk_llt.matrixL().solve(m);  // L^-1 M
  const Eigen::MatrixXd w = skk_llt.matrixL().solve(l_inv_m.transpose());  // L^-1 M L^-T
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      ((w + w.transpose()) * 0.5).eval());

  // descending order; the smallest of the n+1 eigenvalues is structurally
  // zero (the pencil has rank n) and is dropped
  const Eigen::Index full = eig.eigenvalues().size();
  Eigen::VectorXd lambda(n);
  Eigen::MatrixXd vectors(full, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = full - 1 - i;
    double ev = eig.eigenvalues()[src];
    if (ev > 1.0 - 1e-12) {
      throw CollinearityError("canonical correlation indistinguishable from 1; levels and "
                              "differences are collinear");
    }
    lambda[i] = ev < 0.0 ? 0.0 : ev;
    vectors.col(i) = eig.eigenvectors().col(src);
  }
  // back-transform: columns satisfy beta' S_kk beta = I
  Eigen::MatrixXd v = skk_llt.matrixL().transpose().solve(vectors);

  // deterministic sign: largest series coefficient of each column positive
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index pivot = 1;
    for (Eigen::Index rrow = 1; rrow < v.rows(); ++rrow) {
      if (std::abs(v(rrow, c)) > std::abs(v(pivot, c))) pivot = rrow;
    }
    if (v(pivot, c) < 0.0) v.col(c) = -v.col(c);
  }

  CointegrationResult result;
  result.eigenvalues = lambda;
  result.lag_order = k;
  result.effective_sample = d.t_eff;
  result.trace_stats.resize(n);
  result.maxeig_stats.resize(n);
  result.trace_cv_1pct.resize(n);
  result.trace_cv_5pct.resize(n);
  result.maxeig_cv_1pct.resize(n);
  result.maxeig_cv_5pct.resize(n);

  Eigen::VectorXd log_terms(n);
  for (Eigen::Index i = 0; i < n; ++i) log_terms[i] = std::log(1.0 - lambda[i]);
  for (Eigen::Index r = 0; r < n; ++r) {
    result.trace_stats[r] = -t_eff * log_terms.tail(n - r).sum();
    result.maxeig_stats[r] = -t_eff * log_terms[r];
    const int common = static_cast<int>(n - r);
    result.trace_cv_1pct[r] = johansen_critical_value(RankStatistic::kTrace, 0.01, common);
    result.trace_cv_5pct[r] = johansen_critical_value(RankStatistic::kTrace, 0.05, common);
    result.maxeig_cv_1pct[r] = johansen_critical_value(RankStatistic::kMaxEigen, 0.01, common);
    result.maxeig_cv_5pct[r] = johansen_critical_value(RankStatistic::kMaxEigen, 0.05, common);
  }

  // sequential selection on the trace statistic at 1%
  int selected = static_cast<int>(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (result.trace_stats[r] < result.trace_cv_1pct[r]) {
      selected = static_cast<int>(r);
      break;
    }
  }
  result.selected_rank = selected;

  int use_rank = rank.value_or(selected);
  if (use_rank < 0 || use_rank > n) {
    throw ParameterError("rank must lie in 0.." + std::to_string(n));
  }
  result.beta = v.leftCols(use_rank);
  result.alpha = s0k * result.beta;
  return result;
}

Eigen::MatrixXd longrun_score(const LogPanel& levels, const Eigen::MatrixXd& beta) {
  if (beta.rows() != levels.cols() + 1) {
    throw ShapeError("beta must have one row per series plus the constant row");
  }
  Eigen::MatrixXd scores(levels.rows(), beta.cols());
  if (beta.cols() == 0) return scores;
  scores = levels.values * beta.bottomRows(levels.cols());
  scores.rowwise() += beta.row(0);
  return scores;
}

}  // namespace tvvecm
