#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tvvecm/panel.hpp"

namespace tvvecm {

/// How a scheduled coefficient matrix moves over the sample.
enum class SchedulePattern { kConstant, kRamp, kStep, kUser };

/// A deterministic path of one coefficient matrix over T periods.
struct Schedule {
  SchedulePattern pattern = SchedulePattern::kConstant;
  Eigen::MatrixXd value;        ///< constant value / ramp start / pre-break value
  Eigen::MatrixXd end_value;    ///< ramp end / post-break value (unused for constant)
  double break_fraction = 0.5;  ///< step location as a fraction of the sample
  std::vector<Eigen::MatrixXd> user_path;  ///< explicit per-period values (kUser)

  /// Value at period t (0-based) of a sample of `total` periods.
  [[nodiscard]] Eigen::MatrixXd at(Eigen::Index t, Eigen::Index total) const;
};

/// Full description of a synthetic cointegrated system.
///
/// The generator simulates
///
///   dX_t = Gamma_t dX_{t-1} ... + alpha_t * beta'(1, X_{t-k})' + e_t,
///   e_t ~ N(0, noise_cov)
///
/// emitting T monthly rows after a discarded burn-in.  On construction the
/// per-period companion matrix must have exactly n - r roots at one and all
/// remaining roots strictly inside the unit circle.
struct Scenario {
  std::string name = "custom";
  int n = 2;           ///< series count
  int r = 1;           ///< cointegration rank (0 allowed: no long-run relations)
  int lag_order = 1;   ///< k; k-1 lagged-difference terms are simulated
  Eigen::Index periods = 600;  ///< emitted rows T
  YearMonth start{1900, 1};
  std::uint64_t seed = 0;
  std::vector<std::string> names;  ///< column names, size n
  Eigen::MatrixXd beta;            ///< (n+1) x r, constant row first
  Schedule alpha;                  ///< n x r loadings path
  Schedule gamma;                  ///< n x n(k-1) short-run path (0 columns if k=1)
  Eigen::MatrixXd noise_cov;       ///< n x n SPD innovation covariance
  Eigen::Index burn_in = 200;
};

/// Panel plus the ground truth the estimators are judged against.
struct SynthResult {
  PricePanel panel;      ///< exp(logs): strictly positive levels, fully observed
  LogPanel logs;
  Eigen::VectorXd true_zeta;                ///< per emitted period, from alpha_t
  std::vector<Eigen::MatrixXd> true_alpha;  ///< per emitted period
};

/// Validates a scenario: SPD noise_cov (DomainError), consistent shapes
/// (ShapeError), and per-period companion stability with exactly n - r unit
/// roots (InstabilityError naming the first offending period).
void validate_scenario(const Scenario& s);

/// Simulates the scenario.  Pure function of the scenario (including seed):
/// the same scenario yields a bit-identical panel.
SynthResult generate(const Scenario& s);

/// Named presets used by tests and the CLI:
///   baseline    4 series, rank 3, constant loadings, T=620
///   independent 4 independent random walks (rank 0), T=620
///   ramp        baseline with one loading entry ramping linearly
///   step        baseline with a mid-sample step in one loading entry
///   bivariate   2 annual-style series, rank 1, T=50
/// Unknown names raise ParameterError listing the presets.
Scenario make_scenario(const std::string& preset, std::uint64_t seed);

/// All preset names accepted by make_scenario (aliases excluded).
std::vector<std::string> scenario_presets();

}  // namespace tvvecm
