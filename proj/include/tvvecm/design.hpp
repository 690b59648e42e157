#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tvvecm/panel.hpp"

namespace tvvecm {

/// Regression blocks shared by the rank test and both VECM estimators.
///
/// For lag order k and a panel with T rows, the usable sample runs over
/// t = k+1..T (level indexing), giving t_eff = T - k rows:
///
///   z0 row:  dX_t                                   (n columns, responses)
///   z1 row:  dX_{t-1}, ..., dX_{t-k+1}              (n*(k-1) columns)
///   zk row:  1, X_{t-k}                             (n+1 columns)
struct VecmDesign {
  Eigen::MatrixXd z0;
  Eigen::MatrixXd z1;
  Eigen::MatrixXd zk;
  std::vector<std::string> z1_names;  ///< e.g. "d<series>.L1"
  std::vector<std::string> zk_names;  ///< "const", series names
  Eigen::Index t_eff = 0;
  int n = 0;
  int k = 1;
  YearMonth first_month;  ///< month of the first usable response row
};

/// Builds the blocks, validating that diffs really is difference(levels)
/// (ShapeError / AlignmentError / DomainError otherwise) and that at least
/// min_rows usable rows remain (InsufficientDataError).
VecmDesign build_vecm_design(const DiffPanel& diffs, const LogPanel& levels, int k,
                             Eigen::Index min_rows);

}  // namespace tvvecm
