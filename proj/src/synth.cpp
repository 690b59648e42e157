#include "tvvecm/synth.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tvvecm/errors.hpp"
#include "tvvecm/random.hpp"

namespace tvvecm {

Eigen::MatrixXd Schedule::at(Eigen::Index t, Eigen::Index total) const {
  switch (pattern) {
    case SchedulePattern::kConstant:
      return value;
    case SchedulePattern::kRamp: {
      const double frac =
          total > 1 ? static_cast<double>(t) / static_cast<double>(total - 1) : 0.0;
      return value + frac * (end_value - value);
    }
    case SchedulePattern::kStep: {
      const auto break_at =
          static_cast<Eigen::Index>(break_fraction * static_cast<double>(total));
      return t < break_at ? value : end_value;
    }
    case SchedulePattern::kUser:
      if (static_cast<Eigen::Index>(user_path.size()) != total) {
        throw ShapeError("user schedule has " + std::to_string(user_path.size()) +
                         " entries for a sample of " + std::to_string(total));
      }
      return user_path[static_cast<std::size_t>(t)];
  }
  throw ParameterError("unknown schedule pattern");
}

namespace {

void check_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                 const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(what + " must be " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

// Stacks the level-VAR companion matrix implied by the short-run matrices and
// the long-run impact Pi = alpha beta_series' at one period.
Eigen::MatrixXd companion_matrix(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& pi,
                                 int n, int k) {
  // A_1 = I + Gamma_1, A_i = Gamma_i - Gamma_{i-1}, A_k = Pi - Gamma_{k-1}
  std::vector<Eigen::MatrixXd> a(static_cast<std::size_t>(k));
  const auto block = [&](int i) { return gamma.middleCols(static_cast<Eigen::Index>(i) * n, n); };
  if (k == 1) {
    a[0] = Eigen::MatrixXd::Identity(n, n) + pi;
  } else {
    a[0] = Eigen::MatrixXd::Identity(n, n) + block(0);
    for (int i = 1; i + 1 < k; ++i) a[static_cast<std::size_t>(i)] = block(i) - block(i - 1);
    a[static_cast<std::size_t>(k) - 1] = pi - block(k - 2);
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n * k, n * k);
  for (int i = 0; i < k; ++i) {
    companion.block(0, static_cast<Eigen::Index>(i) * n, n, n) = a[static_cast<std::size_t>(i)];
  }
  if (k > 1) {
    companion.block(n, 0, static_cast<Eigen::Index>(n) * (k - 1),
                    static_cast<Eigen::Index>(n) * (k - 1)) =
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n) * (k - 1),
                                  static_cast<Eigen::Index>(n) * (k - 1));
  }
  return companion;
}

// Exactly n - r roots within kUnitTol of one, everything else strictly inside
// the circle by kStableMargin; anything else is reported for `period`.
void check_companion(const Eigen::MatrixXd& companion, int n, int r, Eigen::Index period) {
  constexpr double kUnitTol = 1e-6;
  constexpr double kStableMargin = 1e-6;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) {
    throw ConditioningError("companion eigendecomposition failed");
  }
  int unit_roots = 0;
  for (Eigen::Index i = 0; i < companion.rows(); ++i) {
    const std::complex<double> root = eig.eigenvalues()[i];
    if (std::abs(root - std::complex<double>(1.0, 0.0)) < kUnitTol) {
      ++unit_roots;
    } else if (std::abs(root) >= 1.0 - kStableMargin) {
      throw InstabilityError("companion root of modulus " + std::to_string(std::abs(root)) +
                             " at period " + std::to_string(period) +
                             " is not strictly stable");
    }
  }
  if (unit_roots != n - r) {
    throw InstabilityError("companion matrix at period " + std::to_string(period) + " has " +
                           std::to_string(unit_roots) + " unit roots, expected " +
                           std::to_string(n - r));
  }
}

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.n < 1) throw ParameterError("series count must be at least 1");
  if (s.r < 0 || s.r > s.n) throw ParameterError("rank must lie in [0, n]");
  if (s.lag_order < 1) throw ParameterError("lag order must be at least 1");
  if (s.periods < s.lag_order + 10) {
    throw ParameterError("sample length must exceed the lag order by at least 10");
  }
  if (s.burn_in < 0) throw ParameterError("burn-in cannot be negative");
  if (static_cast<int>(s.names.size()) != s.n) {
    throw ShapeError("expected " + std::to_string(s.n) + " series names, got " +
                     std::to_string(s.names.size()));
  }
  check_shape(s.beta, s.n + 1, s.r, "cointegration matrix");
  check_shape(s.noise_cov, s.n, s.n, "noise covariance");
  if ((s.noise_cov - s.noise_cov.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, s.noise_cov.cwiseAbs().maxCoeff())) {
    throw DomainError("noise covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> noise_eig(s.noise_cov);
  if (noise_eig.info() != Eigen::Success ||
      noise_eig.eigenvalues().minCoeff() <=
          1e-12 * std::max(1.0, noise_eig.eigenvalues().maxCoeff())) {
    throw DomainError("noise covariance is not positive definite");
  }

  const Eigen::MatrixXd beta_series = s.beta.bottomRows(s.n);
  const auto gamma_cols = static_cast<Eigen::Index>(s.n) * (s.lag_order - 1);
  // constant and step schedules cannot fail at interior periods, so only the
  // distinct values are checked
  std::vector<Eigen::Index> probe;
  const auto needs_every_period = [](const Schedule& sched) {
    return sched.pattern == SchedulePattern::kRamp || sched.pattern == SchedulePattern::kUser;
  };
  if (needs_every_period(s.alpha) || needs_every_period(s.gamma)) {
    probe.resize(static_cast<std::size_t>(s.periods));
    for (Eigen::Index t = 0; t < s.periods; ++t) probe[static_cast<std::size_t>(t)] = t;
  } else {
    probe = {0, s.periods - 1};
  }
  for (const auto t : probe) {
    const Eigen::MatrixXd alpha_t = s.alpha.at(t, s.periods);
    const Eigen::MatrixXd gamma_t = s.gamma.at(t, s.periods);
    check_shape(alpha_t, s.n, s.r, "loading matrix");
    check_shape(gamma_t, s.n, gamma_cols, "short-run matrix");
    const Eigen::MatrixXd pi = alpha_t * beta_series.transpose();
    check_companion(companion_matrix(gamma_t, pi, s.n, s.lag_order), s.n, s.r, t);
  }
}

SynthResult generate(const Scenario& s) {
  validate_scenario(s);
  const auto n = static_cast<Eigen::Index>(s.n);
  const int k = s.lag_order;
  const auto total = s.burn_in + s.periods;

  Eigen::LLT<Eigen::MatrixXd> noise_chol(s.noise_cov);
  if (noise_chol.info() != Eigen::Success) {
    throw DomainError("noise covariance is not positive definite");
  }
  const Eigen::MatrixXd noise_factor = noise_chol.matrixL();
  const Eigen::MatrixXd beta_series_t = s.beta.bottomRows(n).transpose();
  const Eigen::VectorXd beta_const = s.beta.row(0).transpose();

  Rng rng(s.seed);
  // history rows: k levels before the first simulated period, all zero
  Eigen::MatrixXd logs(k + total, n);
  logs.topRows(k).setZero();
  Eigen::VectorXd shock(n);
  for (Eigen::Index step = 0; step < total; ++step) {
    // burn-in periods freeze the schedules at their initial value
    const Eigen::Index sched_t = step < s.burn_in ? 0 : step - s.burn_in;
    const Eigen::MatrixXd alpha_t = s.alpha.at(sched_t, s.periods);
    const Eigen::MatrixXd gamma_t = s.gamma.at(sched_t, s.periods);
    const auto row = k + step;

    Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
    for (int lag = 1; lag < k; ++lag) {
      const Eigen::VectorXd lagged_diff =
          (logs.row(row - lag) - logs.row(row - lag - 1)).transpose();
      delta += gamma_t.middleCols(static_cast<Eigen::Index>(lag - 1) * n, n) * lagged_diff;
    }
    if (s.r > 0) {
      delta += alpha_t * (beta_const + beta_series_t * logs.row(row - k).transpose());
    }
    for (Eigen::Index i = 0; i < n; ++i) shock[i] = rng.normal();
    delta += noise_factor * shock;
    logs.row(row) = logs.row(row - 1) + delta.transpose();
    if (!logs.row(row).allFinite() || logs.row(row).cwiseAbs().maxCoeff() > 1e6) {
      throw InstabilityError("simulated path diverged at step " + std::to_string(step));
    }
  }

  SynthResult out;
  out.logs.names = s.names;
  out.logs.start = s.start;
  out.logs.values = logs.bottomRows(s.periods);
  out.panel.names = s.names;
  out.panel.start = s.start;
  // scalar std::exp rather than Eigen's vectorized packet exp: the packet
  // path can differ from libm in the last ulp, and the log/level pair is
  // contracted to be bit-exact inverses of each other
  out.panel.values =
      out.logs.values.unaryExpr([](double v) { return std::exp(v); });
  out.panel.observed = BoolGrid::Constant(s.periods, n, true);
  out.true_zeta.resize(s.periods);
  out.true_alpha.resize(static_cast<std::size_t>(s.periods));
  for (Eigen::Index t = 0; t < s.periods; ++t) {
    const Eigen::MatrixXd alpha_t = s.alpha.at(t, s.periods);
    out.true_alpha[static_cast<std::size_t>(t)] = alpha_t;
    out.true_zeta[t] =
        alpha_t.size() == 0
            ? 0.0
            : Eigen::JacobiSVD<Eigen::MatrixXd>(alpha_t).singularValues()[0];
  }
  return out;
}

namespace {

// Four markets linked in a chain by three stationary spreads.  The loadings
// put the slowest spread well inside the unit circle while keeping every
// speed-selection statistic comfortably away from its critical value.
Scenario baseline_scenario(std::uint64_t seed) {
  Scenario s;
  s.name = "baseline";
  s.n = 4;
  s.r = 3;
  s.lag_order = 2;
  s.periods = 620;
  s.start = YearMonth{1900, 1};
  s.seed = seed;
  s.names = {"north", "south", "east", "west"};

  s.beta = Eigen::MatrixXd::Zero(5, 3);
  s.beta(0, 0) = 0.02;
  s.beta(0, 1) = -0.01;
  s.beta(0, 2) = 0.015;
  s.beta(1, 0) = 1.0;
  s.beta(2, 0) = -1.0;
  s.beta(2, 1) = 1.0;
  s.beta(3, 1) = -1.0;
  s.beta(3, 2) = 1.0;
  s.beta(4, 2) = -1.0;

  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(4, 3);
  const double a = 0.15;
  alpha(0, 0) = -a;
  alpha(1, 0) = a;
  alpha(1, 1) = -a;
  alpha(2, 1) = a;
  alpha(2, 2) = -a;
  alpha(3, 2) = a;
  s.alpha.pattern = SchedulePattern::kConstant;
  s.alpha.value = alpha;

  s.gamma.pattern = SchedulePattern::kConstant;
  s.gamma.value = 0.15 * Eigen::MatrixXd::Identity(4, 4);

  s.noise_cov = Eigen::MatrixXd::Constant(4, 4, 0.0004 * 0.25);
  s.noise_cov.diagonal().setConstant(0.0004);
  return s;
}

}  // namespace

Scenario make_scenario(const std::string& preset, std::uint64_t seed) {
  if (preset == "baseline" || preset == "paperlike") {
    return baseline_scenario(seed);
  }
  if (preset == "independent") {
    Scenario s;
    s.name = "independent";
    s.n = 4;
    s.r = 0;
    s.lag_order = 1;
    s.periods = 620;
    s.start = YearMonth{1900, 1};
    s.seed = seed;
    s.names = {"north", "south", "east", "west"};
    s.beta = Eigen::MatrixXd::Zero(5, 0);
    s.alpha.pattern = SchedulePattern::kConstant;
    s.alpha.value = Eigen::MatrixXd::Zero(4, 0);
    s.gamma.pattern = SchedulePattern::kConstant;
    s.gamma.value = Eigen::MatrixXd::Zero(4, 0);
    s.noise_cov = 0.0004 * Eigen::MatrixXd::Identity(4, 4);
    return s;
  }
  if (preset == "ramp" || preset == "step") {
    Scenario s = baseline_scenario(seed);
    s.name = preset;
    Eigen::MatrixXd strong = s.alpha.value;
    // the first market pair's spread adjustment doubles over the sample;
    // pushing it much past this leaves the mid-path companion matrix with a
    // root on the unit circle and the simulation diverges
    strong(0, 0) = -0.30;
    strong(1, 0) = 0.30;
    s.alpha.end_value = strong;
    s.alpha.pattern =
        preset == "ramp" ? SchedulePattern::kRamp : SchedulePattern::kStep;
    s.alpha.break_fraction = 0.5;
    return s;
  }
  if (preset == "bivariate") {
    Scenario s;
    s.name = "bivariate";
    s.n = 2;
    s.r = 1;
    s.lag_order = 2;
    s.periods = 50;
    s.start = YearMonth{1881, 1};
    s.seed = seed;
    s.names = {"spot", "forward"};
    s.beta.resize(3, 1);
    s.beta << 0.01, 1.0, -1.0;
    s.alpha.pattern = SchedulePattern::kConstant;
    s.alpha.value.resize(2, 1);
    s.alpha.value << -0.25, 0.25;
    s.gamma.pattern = SchedulePattern::kConstant;
    s.gamma.value = 0.1 * Eigen::MatrixXd::Identity(2, 2);
    s.noise_cov.resize(2, 2);
    s.noise_cov << 0.0009, 0.00027, 0.00027, 0.0009;
    return s;
  }
  throw ParameterError("unknown scenario preset '" + preset +
                       "' (available: baseline, independent, ramp, step, bivariate)");
}

std::vector<std::string> scenario_presets() {
  return {"baseline", "independent", "ramp", "step", "bivariate"};
}

}  // namespace tvvecm
