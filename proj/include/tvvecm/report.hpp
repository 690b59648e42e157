#pragma once

#include <map>
#include <string>
#include <vector>

#include "tvvecm/csv.hpp"
#include "tvvecm/johansen.hpp"
#include "tvvecm/tv_vecm.hpp"
#include "tvvecm/unit_root.hpp"
#include "tvvecm/vecm.hpp"

namespace tvvecm {

/// Descriptives plus the unit-root screen, one column per series: level and
/// difference blocks with mean, s.d., min, max, the GLS-ADF statistic, its
/// selected lag count, the sum of AR coefficients, and N.
Table build_descriptives_table(const LogPanel& levels, const DiffPanel& diffs,
                               const std::vector<AdfGlsResult>& level_tests,
                               const std::vector<AdfGlsResult>& diff_tests);

/// Rank-test table: one row per null ("None", "At most 1", ...) with the
/// eigenvalue, max-eigenvalue statistic and 1% critical value, trace
/// statistic and 1% critical value, and the rejection flags.
Table build_rank_table(const CointegrationResult& result);

/// Coefficient table: short-run block then long-run block (constant first),
/// one column pair (estimate, bracketed s.e.) per equation, with adjusted
/// R^2 and the joint constancy statistic appended.
Table build_coefficient_table(const VecmFit& fit);

/// Speed-index table: month, zeta, band bounds, acceleration.  Band cells are
/// empty when the path carries no bands; the acceleration cell is empty on
/// the first row.
Table build_speed_table(const IntegrationSpeedPath& path);

/// Two-panel robustness table: the rank panel followed by the coefficient
/// panel of the bivariate annual fit.
Table build_bivariate_table(const BivariateVecm& biv);

}  // namespace tvvecm
