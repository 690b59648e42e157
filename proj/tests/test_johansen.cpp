#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/oracles.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/johansen.hpp"
#include "tvvecm/panel.hpp"
#include "tvvecm/synth.hpp"

using namespace tvvecm;

namespace {

struct Generated {
  SynthResult data;
  DiffPanel diffs;
};

Generated run_preset(const std::string& preset, std::uint64_t seed,
                     Eigen::Index periods = 0) {
  Scenario scn = make_scenario(preset, seed);
  if (periods > 0) scn.periods = periods;
  Generated g{generate(scn), {}};
  g.diffs = difference(g.data.logs);
  return g;
}

}  // namespace

TEST_CASE("rank-test critical values are the published restricted-constant ones") {
  const double trace_1[] = {12.97, 24.60, 41.07, 60.16};
  const double trace_5[] = {9.24, 19.96, 34.91, 53.12};
  const double maxeig_1[] = {12.97, 20.20, 26.81, 33.24};
  const double maxeig_5[] = {9.24, 15.67, 22.00, 28.14};
  for (int m = 1; m <= 4; ++m) {
    REQUIRE(johansen_critical_value(RankStatistic::kTrace, 0.01, m) == trace_1[m - 1]);
    REQUIRE(johansen_critical_value(RankStatistic::kTrace, 0.05, m) == trace_5[m - 1]);
    REQUIRE(johansen_critical_value(RankStatistic::kMaxEigen, 0.01, m) == maxeig_1[m - 1]);
    REQUIRE(johansen_critical_value(RankStatistic::kMaxEigen, 0.05, m) == maxeig_5[m - 1]);
  }
  REQUIRE_THROWS_AS(johansen_critical_value(RankStatistic::kTrace, 0.01, 5), ParameterError);
  REQUIRE_THROWS_AS(johansen_critical_value(RankStatistic::kTrace, 0.10, 2), ParameterError);
}

TEST_CASE("bivariate system recovers rank one and the long-run direction") {
  const Generated g = run_preset("bivariate", 11, 200);
  const CointegrationResult res = johansen(g.diffs, g.data.logs, 2);

  REQUIRE(res.selected_rank == 1);
  REQUIRE(res.lag_order == 2);
  REQUIRE(res.effective_sample == 198);
  REQUIRE(res.beta.rows() == 3);
  REQUIRE(res.beta.cols() == 1);
  REQUIRE(res.alpha.rows() == 2);

  // The estimated direction should almost coincide with the true (1, -1)
  // relation between the two log series (constant row excluded).
  Eigen::MatrixXd truth(2, 1);
  truth << 1.0, -1.0;
  const double angle =
      oracles::largest_principal_angle(res.beta.bottomRows(2), truth);
  REQUIRE(angle < 0.08);  // under ~4.5 degrees
}

TEST_CASE("statistics respect their algebraic structure") {
  const Generated g = run_preset("baseline", 7);
  const CointegrationResult res = johansen(g.diffs, g.data.logs, 2);
  const int n = 4;

  REQUIRE(res.eigenvalues.size() == n);
  for (int i = 0; i < n; ++i) {
    REQUIRE(res.eigenvalues(i) >= 0.0);
    REQUIRE(res.eigenvalues(i) < 1.0);
    if (i > 0) REQUIRE(res.eigenvalues(i) <= res.eigenvalues(i - 1));
  }

  // The last null hypothesis tests a single eigenvalue, so trace and
  // max-eigenvalue statistics coincide there.
  REQUIRE(res.trace_stats(n - 1) ==
          Catch::Approx(res.maxeig_stats(n - 1)).margin(1e-12));

  // Trace statistic telescopes: entry r equals entry r+1 plus maxeig entry r.
  for (int r = 0; r + 1 < n; ++r) {
    REQUIRE(res.trace_stats(r) ==
            Catch::Approx(res.trace_stats(r + 1) + res.maxeig_stats(r)).margin(1e-9));
  }

  // Critical values line up with m = n - r common trends.
  for (int r = 0; r < n; ++r) {
    REQUIRE(res.trace_cv_1pct(r) ==
            johansen_critical_value(RankStatistic::kTrace, 0.01, n - r));
    REQUIRE(res.maxeig_cv_5pct(r) ==
            johansen_critical_value(RankStatistic::kMaxEigen, 0.05, n - r));
  }
}

TEST_CASE("sign convention makes the dominant series coefficient positive") {
  const Generated g = run_preset("baseline", 19);
  const CointegrationResult res = johansen(g.diffs, g.data.logs, 2);
  for (Eigen::Index c = 0; c < res.beta.cols(); ++c) {
    Eigen::Index argmax = 0;
    res.beta.col(c).tail(4).cwiseAbs().maxCoeff(&argmax);
    REQUIRE(res.beta(1 + argmax, c) > 0.0);
  }
}

TEST_CASE("forced rank overrides the sequential choice") {
  const Generated g = run_preset("baseline", 23);
  const CointegrationResult forced = johansen(g.diffs, g.data.logs, 2, 2);
  REQUIRE(forced.beta.cols() == 2);
  REQUIRE(forced.alpha.cols() == 2);
  const CointegrationResult free = johansen(g.diffs, g.data.logs, 2);
  REQUIRE(free.selected_rank == forced.selected_rank);  // selection itself unchanged
}

TEST_CASE("independent random walks select rank zero at lag one") {
  const Generated g = run_preset("independent", 5);
  const CointegrationResult res = johansen(g.diffs, g.data.logs, 1);
  REQUIRE(res.selected_rank == 0);
  REQUIRE(res.lag_order == 1);
  REQUIRE(res.beta.cols() == 0);
  REQUIRE(res.alpha.cols() == 0);
}

TEST_CASE("long-run scores multiply out by hand") {
  LogPanel logs;
  logs.names = {"a", "b"};
  logs.start = YearMonth{1900, 1};
  logs.values.resize(3, 2);
  logs.values << 1.0, 2.0, 1.5, 2.5, 2.0, 3.0;

  Eigen::MatrixXd beta(3, 1);
  beta << 0.5, 1.0, -1.0;  // constant, a, b
  const Eigen::MatrixXd scores = longrun_score(logs, beta);
  REQUIRE(scores.rows() == 3);
  REQUIRE(scores.cols() == 1);
  REQUIRE(scores(0, 0) == Catch::Approx(0.5 + 1.0 - 2.0).margin(1e-15));
  REQUIRE(scores(2, 0) == Catch::Approx(0.5 + 2.0 - 3.0).margin(1e-15));

  REQUIRE_THROWS_AS(longrun_score(logs, Eigen::MatrixXd::Zero(2, 1)), ShapeError);
}

TEST_CASE("rank analysis rejects unusable inputs") {
  // 10n = 20 usable rows needed; 15 periods leave 13 at k = 2.
  Scenario tiny = make_scenario("bivariate", 2);
  tiny.periods = 15;
  const SynthResult small = generate(tiny);
  const DiffPanel small_diffs = difference(small.logs);
  REQUIRE_THROWS_AS(johansen(small_diffs, small.logs, 2), InsufficientDataError);

  // Mismatched diffs: drop the first difference row so alignment breaks.
  const Generated g = run_preset("bivariate", 2, 100);
  DiffPanel broken = g.diffs;
  broken.values = g.diffs.values.bottomRows(g.diffs.values.rows() - 1).eval();
  REQUIRE_THROWS_AS(johansen(broken, g.data.logs, 2), Error);
}

TEST_CASE("rank analysis is deterministic") {
  const Generated g = run_preset("baseline", 55);
  const CointegrationResult a = johansen(g.diffs, g.data.logs, 2);
  const CointegrationResult b = johansen(g.diffs, g.data.logs, 2);
  REQUIRE((a.beta - b.beta).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
}
