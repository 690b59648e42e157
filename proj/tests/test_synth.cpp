#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "support/oracles.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/synth.hpp"

using namespace tvvecm;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("schedules interpolate as declared") {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a << 2.0;
  b << 6.0;

  Schedule constant;
  constant.value = a;
  REQUIRE(constant.at(3, 10)(0, 0) == 2.0);

  Schedule ramp;
  ramp.pattern = SchedulePattern::kRamp;
  ramp.value = a;
  ramp.end_value = b;
  REQUIRE(ramp.at(0, 11)(0, 0) == 2.0);
  REQUIRE(ramp.at(10, 11)(0, 0) == 6.0);
  REQUIRE(ramp.at(5, 11)(0, 0) == Catch::Approx(4.0).margin(1e-14));

  Schedule step;
  step.pattern = SchedulePattern::kStep;
  step.value = a;
  step.end_value = b;
  step.break_fraction = 0.5;
  REQUIRE(step.at(4, 10)(0, 0) == 2.0);
  REQUIRE(step.at(5, 10)(0, 0) == 6.0);

  Schedule user;
  user.pattern = SchedulePattern::kUser;
  user.user_path = {a, b, a};
  REQUIRE(user.at(1, 3)(0, 0) == 6.0);
  REQUIRE_THROWS_AS(user.at(1, 4), ShapeError);
}

TEST_CASE("generation is a pure function of the scenario") {
  const Scenario scn = make_scenario("baseline", 7);
  const SynthResult a = generate(scn);
  const SynthResult b = generate(scn);
  REQUIRE((a.logs.values - b.logs.values).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((a.true_zeta - b.true_zeta).cwiseAbs().maxCoeff() == 0.0);

  Scenario reseeded = scn;
  reseeded.seed = 8;
  const SynthResult c = generate(reseeded);
  REQUIRE((a.logs.values - c.logs.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("panel is the exponential of the logs and fully observed") {
  const SynthResult r = generate(make_scenario("baseline", 3));
  REQUIRE(r.panel.rows() == 620);
  REQUIRE(r.panel.cols() == 4);
  REQUIRE(r.panel.fully_observed());
  REQUIRE(r.panel.names == std::vector<std::string>{"north", "south", "east", "west"});
  REQUIRE(r.panel.start == YearMonth{1900, 1});
  REQUIRE(r.logs.start == r.panel.start);
  for (Eigen::Index t = 0; t < 5; ++t) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      REQUIRE(r.panel.values(t, j) == std::exp(r.logs.values(t, j)));
    }
  }
}

TEST_CASE("constant-loading truth has a flat speed index") {
  const Scenario scn = make_scenario("baseline", 42);
  const SynthResult r = generate(scn);
  REQUIRE(r.true_zeta.size() == 620);
  REQUIRE(r.true_alpha.size() == 620);

  const double expected = oracles::svd_sigma_max(scn.alpha.value);
  for (Eigen::Index t = 0; t < r.true_zeta.size(); ++t) {
    REQUIRE(r.true_zeta(t) == Catch::Approx(expected).margin(1e-12));
  }
  REQUIRE((r.true_alpha[100] - scn.alpha.value).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ramp truth moves and step truth jumps once") {
  const SynthResult ramp = generate(make_scenario("ramp", 1));
  REQUIRE(ramp.true_zeta(0) < ramp.true_zeta(619));
  REQUIRE(ramp.true_zeta(619) > 1.5 * ramp.true_zeta(0));

  const SynthResult step = generate(make_scenario("step", 1));
  std::set<double> distinct;
  for (Eigen::Index t = 0; t < step.true_zeta.size(); ++t) distinct.insert(step.true_zeta(t));
  REQUIRE(distinct.size() == 2);
  REQUIRE(step.true_zeta(309) == step.true_zeta(0));
  REQUIRE(step.true_zeta(310) == step.true_zeta(619));
}

TEST_CASE("presets are enumerable and the alias maps onto the baseline") {
  REQUIRE(scenario_presets() ==
          std::vector<std::string>{"baseline", "independent", "ramp", "step", "bivariate"});
  for (const auto& name : scenario_presets()) {
    REQUIRE_NOTHROW(validate_scenario(make_scenario(name, 1)));
  }

  const SynthResult a = generate(make_scenario("paperlike", 7));
  const SynthResult b = generate(make_scenario("baseline", 7));
  REQUIRE((a.logs.values - b.logs.values).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE_THROWS_WITH(make_scenario("nosuch", 1), ContainsSubstring("baseline"));
}

TEST_CASE("independent preset carries no long-run relations") {
  const Scenario scn = make_scenario("independent", 9);
  REQUIRE(scn.r == 0);
  REQUIRE(scn.lag_order == 1);
  const SynthResult r = generate(scn);
  REQUIRE(r.true_zeta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scenario validation rejects inconsistent inputs") {
  Scenario scn = make_scenario("bivariate", 1);

  SECTION("rank out of range") {
    scn.r = 3;
    REQUIRE_THROWS_AS(validate_scenario(scn), Error);
  }
  SECTION("beta shape") {
    scn.beta = Eigen::MatrixXd::Zero(2, 1);
    REQUIRE_THROWS_AS(validate_scenario(scn), ShapeError);
  }
  SECTION("asymmetric noise") {
    scn.noise_cov(0, 1) = 0.5;
    REQUIRE_THROWS_AS(validate_scenario(scn), DomainError);
  }
  SECTION("indefinite noise") {
    scn.noise_cov << 1.0, 2.0, 2.0, 1.0;
    REQUIRE_THROWS_AS(validate_scenario(scn), DomainError);
  }
  SECTION("too few periods") {
    scn.periods = scn.lag_order + 3;
    REQUIRE_THROWS_AS(validate_scenario(scn), Error);
  }
  SECTION("zero loadings leave too many unit roots") {
    scn.alpha.value = Eigen::MatrixXd::Zero(2, 1);
    REQUIRE_THROWS_AS(validate_scenario(scn), InstabilityError);
  }
  SECTION("sign-flipped loadings destabilise the system") {
    scn.alpha.value = -scn.alpha.value;
    REQUIRE_THROWS_AS(validate_scenario(scn), InstabilityError);
  }
  SECTION("name count") {
    scn.names = {"only"};
    REQUIRE_THROWS_AS(validate_scenario(scn), ShapeError);
  }
}

TEST_CASE("bivariate preset describes a short annual-style sample") {
  const Scenario scn = make_scenario("bivariate", 6);
  REQUIRE(scn.n == 2);
  REQUIRE(scn.r == 1);
  REQUIRE(scn.periods == 50);
  REQUIRE(scn.start == YearMonth{1881, 1});
  REQUIRE(scn.names == std::vector<std::string>{"spot", "forward"});
  const SynthResult r = generate(scn);
  REQUIRE(r.logs.rows() == 50);
}
