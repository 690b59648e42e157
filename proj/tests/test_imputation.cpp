#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "tvvecm/errors.hpp"
#include "tvvecm/imputation.hpp"
#include "tvvecm/panel.hpp"
#include "tvvecm/random.hpp"

using namespace tvvecm;

namespace {

/// Level + deterministic seasonal + observation noise, in price units.
Eigen::VectorXd seasonal_series(std::uint64_t seed, Eigen::Index t_obs, double obs_sd,
                                Eigen::VectorXd* truth = nullptr) {
  Rng rng(seed);
  Eigen::VectorXd y(t_obs);
  double level = 100.0;
  if (truth) truth->resize(t_obs);
  for (Eigen::Index t = 0; t < t_obs; ++t) {
    level += 0.4 * rng.normal();
    const double seasonal = 4.0 * std::sin(2.0 * M_PI * t / 12.0) +
                            2.0 * std::cos(2.0 * M_PI * t / 12.0);
    const double signal = level + seasonal;
    if (truth) (*truth)(t) = signal;
    y(t) = signal + obs_sd * rng.normal();
  }
  return y;
}

}  // namespace

TEST_CASE("smoother tracks a local level without seasonality") {
  Rng rng(404);
  const Eigen::Index t_obs = 200;
  Eigen::VectorXd truth(t_obs), y(t_obs);
  double level = 50.0;
  for (Eigen::Index t = 0; t < t_obs; ++t) {
    level += 0.5 * rng.normal();
    truth(t) = level;
    y(t) = level + 0.3 * rng.normal();
  }
  const Eigen::Array<bool, Eigen::Dynamic, 1> all =
      Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(t_obs, true);

  const SeasonalSmootherFit fit = fit_seasonal_smoother(y, all, 1);
  REQUIRE(std::isfinite(fit.log_likelihood));
  REQUIRE(fit.level_var >= 0.0);
  REQUIRE(fit.obs_var >= 0.0);
  REQUIRE(fit.smoothed.size() == t_obs);
  const double rmse = std::sqrt((fit.smoothed - truth).squaredNorm() / t_obs);
  REQUIRE(rmse < 0.3);  // better than using raw y (obs noise alone is 0.3)
}

TEST_CASE("smoother is deterministic") {
  Eigen::VectorXd y = seasonal_series(7, 120, 0.5);
  Eigen::Array<bool, Eigen::Dynamic, 1> obs =
      Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(120, true);
  obs(17) = obs(53) = false;
  const SeasonalSmootherFit a = fit_seasonal_smoother(y, obs, 12);
  const SeasonalSmootherFit b = fit_seasonal_smoother(y, obs, 12);
  REQUIRE(a.level_var == b.level_var);
  REQUIRE(a.seasonal_var == b.seasonal_var);
  REQUIRE(a.obs_var == b.obs_var);
  REQUIRE((a.smoothed - b.smoothed).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("imputation fills masked cells and only masked cells") {
  const Eigen::Index t_obs = 240;
  Eigen::VectorXd truth_a, truth_b;
  PricePanel panel;
  panel.names = {"a", "b"};
  panel.start = YearMonth{1895, 1};
  panel.values.resize(t_obs, 2);
  panel.values.col(0) = seasonal_series(21, t_obs, 1.0, &truth_a);
  panel.values.col(1) = seasonal_series(22, t_obs, 1.0, &truth_b);
  panel.observed = BoolGrid::Constant(t_obs, 2, true);

  // Mask 5% of each column.
  Rng rng(5005);
  std::set<Eigen::Index> masked_a, masked_b;
  while (masked_a.size() < 12) masked_a.insert(static_cast<Eigen::Index>(rng.uniform_index(t_obs)));
  while (masked_b.size() < 12) masked_b.insert(static_cast<Eigen::Index>(rng.uniform_index(t_obs)));
  PricePanel holed = panel;
  for (auto t : masked_a) {
    holed.observed(t, 0) = false;
    holed.values(t, 0) = std::numeric_limits<double>::quiet_NaN();
  }
  for (auto t : masked_b) {
    holed.observed(t, 1) = false;
    holed.values(t, 1) = std::numeric_limits<double>::quiet_NaN();
  }

  const PricePanel filled = impute(holed, 12);
  REQUIRE(filled.fully_observed());

  // Observed cells are untouched, bit for bit.
  for (Eigen::Index t = 0; t < t_obs; ++t) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      if (holed.observed(t, j)) REQUIRE(filled.values(t, j) == holed.values(t, j));
    }
  }

  // Filled cells sit close to the latent signal (obs noise s.d. is 1).
  double se = 0.0;
  for (auto t : masked_a) se += std::pow(filled.values(t, 0) - truth_a(t), 2);
  for (auto t : masked_b) se += std::pow(filled.values(t, 1) - truth_b(t), 2);
  const double rmse = std::sqrt(se / (masked_a.size() + masked_b.size()));
  REQUIRE(rmse < 1.5);
}

TEST_CASE("imputation leaves a complete panel alone") {
  PricePanel panel;
  panel.names = {"x"};
  panel.start = YearMonth{1900, 1};
  panel.values = seasonal_series(9, 120, 0.5);
  panel.observed = BoolGrid::Constant(120, 1, true);
  const PricePanel out = impute(panel, 12);
  REQUIRE((out.values - panel.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("imputation needs enough observations per column") {
  PricePanel panel;
  panel.names = {"x"};
  panel.start = YearMonth{1900, 1};
  panel.values = Eigen::MatrixXd::Constant(30, 1, 100.0);
  panel.observed = BoolGrid::Constant(30, 1, true);
  panel.observed.topRows(10).setConstant(false);  // 20 observed < 3 * 12
  REQUIRE_THROWS_AS(impute(panel, 12), InsufficientDataError);
}
