#include "tvvecm/design.hpp"

#include <cmath>

#include "tvvecm/errors.hpp"

namespace tvvecm {

VecmDesign build_vecm_design(const DiffPanel& diffs, const LogPanel& levels, int k,
                             Eigen::Index min_rows) {
  if (k < 1) throw ParameterError("lag order must be >= 1");
  const Eigen::Index t_levels = levels.rows();
  const auto n = levels.cols();
  if (diffs.cols() != n || diffs.names != levels.names) {
    throw AlignmentError("difference and level panels disagree on series");
  }
  if (diffs.rows() != t_levels - 1 || diffs.start != levels.start.plus_months(1)) {
    throw AlignmentError("difference panel is not the first difference of the level panel");
  }
  for (Eigen::Index i = 0; i < diffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double expected = levels.values(i + 1, j) - levels.values(i, j);
      if (!std::isfinite(diffs.values(i, j)) ||
          std::abs(diffs.values(i, j) - expected) > 1e-10) {
        throw DomainError("difference panel does not match level differences at row " +
                          std::to_string(i));
      }
    }
  }

  const Eigen::Index t_eff = t_levels - k;
  if (t_eff < min_rows) {
    throw InsufficientDataError("only " + std::to_string(t_eff) + " usable rows at lag order " +
                                std::to_string(k) + "; need " + std::to_string(min_rows));
  }

  VecmDesign d;
  d.n = static_cast<int>(n);
  d.k = k;
  d.t_eff = t_eff;
  d.first_month = levels.start.plus_months(k);
  d.z0.resize(t_eff, n);
  d.z1.resize(t_eff, n * (k - 1));
  d.zk.resize(t_eff, n + 1);
  for (Eigen::Index row = 0; row < t_eff; ++row) {
    const Eigen::Index t = k + row;             // level index of the response month
    d.z0.row(row) = diffs.values.row(t - 1);    // dX_t
    for (int lag = 1; lag < k; ++lag) {
      d.z1.block(row, static_cast<Eigen::Index>(lag - 1) * n, 1, n) =
          diffs.values.row(t - lag - 1);        // dX_{t-lag}
    }
    d.zk(row, 0) = 1.0;
    d.zk.block(row, 1, 1, n) = levels.values.row(row);  // X_{t-k}
  }

  for (int lag = 1; lag < k; ++lag) {
    for (Eigen::Index j = 0; j < n; ++j) {
      d.z1_names.push_back("d" + levels.names[static_cast<std::size_t>(j)] + ".L" +
                           std::to_string(lag));
    }
  }
  d.zk_names.push_back("const");
  for (const auto& name : levels.names) d.zk_names.push_back(name);
  return d;
}

}  // namespace tvvecm
