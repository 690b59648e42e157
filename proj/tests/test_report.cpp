#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <vector>

#include "tvvecm/errors.hpp"
#include "tvvecm/johansen.hpp"
#include "tvvecm/panel.hpp"
#include "tvvecm/report.hpp"
#include "tvvecm/stats.hpp"
#include "tvvecm/svg.hpp"
#include "tvvecm/synth.hpp"
#include "tvvecm/tv_vecm.hpp"
#include "tvvecm/unit_root.hpp"
#include "tvvecm/vecm.hpp"

using namespace tvvecm;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Fixture {
  SynthResult data;
  DiffPanel diffs;
  CointegrationResult coint;
  VecmFit fit;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out{generate(make_scenario("baseline", 7)), {}, {}, {}};
    out.diffs = difference(out.data.logs);
    out.coint = johansen(out.diffs, out.data.logs, 2);
    out.fit = fit_vecm(out.diffs, out.data.logs, 2, out.coint.beta);
    return out;
  }();
  return f;
}

std::string render(const Table& t) {
  std::ostringstream out;
  write_table(t, out);
  return out.str();
}

}  // namespace

TEST_CASE("descriptives table carries both blocks for every series") {
  const Fixture& f = fixture();
  std::vector<AdfGlsResult> level_tests, diff_tests;
  for (Eigen::Index j = 0; j < 4; ++j) {
    level_tests.push_back(adf_gls(f.data.logs.values.col(j), Detrend::kConstantTrend));
    diff_tests.push_back(adf_gls(f.diffs.values.col(j), Detrend::kConstant));
  }

  const Table t = build_descriptives_table(f.data.logs, f.diffs, level_tests, diff_tests);
  REQUIRE(t.header == std::vector<std::string>{"statistic", "north", "south", "east", "west"});
  REQUIRE(t.rows.size() == 16);
  for (const auto& row : t.rows) REQUIRE(row.size() == 5);

  // The level-mean row reproduces the column mean.
  double got = 0.0;
  REQUIRE(parse_number(t.rows[0][1], got));
  REQUIRE(got == Catch::Approx(mean(f.data.logs.values.col(0))).margin(1e-9));

  std::vector<AdfGlsResult> short_list(level_tests.begin(), level_tests.end() - 1);
  REQUIRE_THROWS_AS(build_descriptives_table(f.data.logs, f.diffs, short_list, diff_tests),
                    AlignmentError);
}

TEST_CASE("rank table lists one null per possible rank") {
  const Fixture& f = fixture();
  const Table t = build_rank_table(f.coint);
  REQUIRE(t.header ==
          std::vector<std::string>{"null", "eigenvalue", "maxeig_stat", "maxeig_cv_1pct",
                                   "maxeig_reject_1pct", "trace_stat", "trace_cv_1pct",
                                   "trace_reject_1pct"});
  REQUIRE(t.rows.size() == 4);
  REQUIRE(t.rows[0][0] == "None");
  REQUIRE(t.rows[1][0] == "At most 1");
  REQUIRE(t.rows[3][0] == "At most 3");
  for (const auto& row : t.rows) {
    REQUIRE((row[4] == "yes" || row[4] == "no"));
    REQUIRE((row[7] == "yes" || row[7] == "no"));
  }
  // Flags agree with the numbers in the same row.
  double stat = 0.0, cv = 0.0;
  REQUIRE(parse_number(t.rows[0][5], stat));
  REQUIRE(parse_number(t.rows[0][6], cv));
  REQUIRE(((stat > cv) == (t.rows[0][7] == "yes")));
}

TEST_CASE("coefficient table brackets standard errors") {
  const Fixture& f = fixture();
  const Table t = build_coefficient_table(f.fit);
  REQUIRE(t.header.front() == "term");
  REQUIRE(t.header.size() == 1 + 2 * 4);

  const std::string text = render(t);
  REQUIRE_THAT(text, ContainsSubstring("const"));
  REQUIRE_THAT(text, ContainsSubstring("adj_r2"));
  REQUIRE_THAT(text, ContainsSubstring("constancy_lc"));
  REQUIRE_THAT(text, ContainsSubstring("("));

  bool found_const = false;
  for (const auto& row : t.rows) found_const = found_const || row[0] == "const";
  REQUIRE(found_const);
}

TEST_CASE("speed table prints bands only when they exist") {
  const Fixture& f = fixture();
  const TvVecmFit tv = fit_tv_vecm(f.diffs, f.data.logs, 2, f.coint.beta, 1.0);
  IntegrationSpeedPath path = integration_speed(tv);

  const Table bare = build_speed_table(path);
  REQUIRE(bare.header == std::vector<std::string>{"date", "zeta", "lo", "hi", "accel"});
  REQUIRE(bare.rows.size() == static_cast<std::size_t>(path.zeta.size()));
  REQUIRE(bare.rows[0][2].empty());
  REQUIRE(bare.rows[0][4].empty());       // no acceleration on the first row
  REQUIRE_FALSE(bare.rows[1][4].empty());
  REQUIRE(bare.rows[0][0] == format_year_month(path.first_month));

  path.lower = (path.zeta.array() - 0.01).matrix();
  path.upper = (path.zeta.array() + 0.01).matrix();
  path.coverage = 0.9;
  const Table banded = build_speed_table(path);
  REQUIRE_FALSE(banded.rows[0][2].empty());
  REQUIRE_FALSE(banded.rows[0][3].empty());
}

TEST_CASE("bivariate table flattens both panels into long form") {
  const SynthResult r = generate(make_scenario("bivariate", 3));
  AnnualSeries a{"speed", 1881, r.panel.values.col(0)};
  AnnualSeries b{"freight", 1881, r.panel.values.col(1)};
  const BivariateVecm biv = fit_vecm_bivariate(a, b);

  const Table t = build_bivariate_table(biv);
  REQUIRE(t.header == std::vector<std::string>{"panel", "term", "column", "value"});
  bool has_rank = false, has_coef = false;
  for (const auto& row : t.rows) {
    REQUIRE(row.size() == 4);
    REQUIRE_FALSE(row[3].empty());
    has_rank = has_rank || row[0] == "rank";
    has_coef = has_coef || row[0] == "coefficients";
  }
  REQUIRE(has_rank);
  REQUIRE(has_coef);
}

TEST_CASE("speed chart renders a two-panel svg") {
  const Fixture& f = fixture();
  const TvVecmFit tv = fit_tv_vecm(f.diffs, f.data.logs, 2, f.coint.beta, 1.0);
  IntegrationSpeedPath path = integration_speed(tv);

  const std::string bare = render_speed_svg(path);
  REQUIRE_THAT(bare, ContainsSubstring("<svg"));
  REQUIRE_THAT(bare, ContainsSubstring("</svg>"));
  REQUIRE_THAT(bare, ContainsSubstring("<path d=\"M"));
  REQUIRE_THAT(bare, ContainsSubstring("integration speed"));
  REQUIRE_THAT(bare, !ContainsSubstring("fill-opacity"));  // no band without bounds

  path.lower = (path.zeta.array() - 0.01).matrix();
  path.upper = (path.zeta.array() + 0.01).matrix();
  path.coverage = 0.9;
  const std::string banded = render_speed_svg(path);
  REQUIRE_THAT(banded, ContainsSubstring("fill-opacity"));
  REQUIRE(render_speed_svg(path) == banded);  // deterministic

  IntegrationSpeedPath stub;
  stub.zeta.resize(1);
  stub.zeta << 0.5;
  stub.first_month = YearMonth{1900, 1};
  REQUIRE_THROWS_AS(render_speed_svg(stub), InsufficientDataError);
}
