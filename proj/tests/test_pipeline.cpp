#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "tvvecm/csv.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/panel.hpp"
#include "tvvecm/pipeline.hpp"
#include "tvvecm/random.hpp"
#include "tvvecm/synth.hpp"

using namespace tvvecm;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory under the system temp root, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("tvvecm_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string write_panel(const TempDir& dir, const std::string& preset, std::uint64_t seed) {
  const SynthResult r = generate(make_scenario(preset, seed));
  const std::string path = dir.file("panel.csv");
  emit_csv_file(r.panel, path);
  return path;
}

PipelineConfig base_config(const std::string& input, const std::string& outdir) {
  PipelineConfig cfg;
  cfg.input_path = input;
  cfg.output_dir = outdir;
  cfg.fixed_lag = 2;
  cfg.bootstrap_replications = 100;
  cfg.seed = 11;
  return cfg;
}

const std::vector<std::string> kOutputs = {"table1.csv", "table2.csv", "table3.csv",
                                           "zeta.csv",   "zeta.svg",   "manifest.json"};

}  // namespace

TEST_CASE("config parser understands the documented keys") {
  std::istringstream in(
      "# comment line\n"
      "input = data/panel.csv\n"
      "output_dir = out\n"
      "\n"
      "imputation_period = 6\n"
      "detrend = constant\n"
      "lag_criterion = maic\n"
      "lag = 3\n"
      "rank = 2\n"
      "max_lag = 8\n"
      "lambda = auto\n"
      "bootstrap_reps = 250\n"
      "coverage = 0.8   # trailing comment\n"
      "seed = 97\n"
      "threads = 2\n");
  const PipelineConfig cfg = parse_pipeline_config(in);
  REQUIRE(cfg.input_path == "data/panel.csv");
  REQUIRE(cfg.output_dir == "out");
  REQUIRE(cfg.imputation_period_months == 6);
  REQUIRE(cfg.detrend_case == Detrend::kConstant);
  REQUIRE(cfg.lag_criterion == LagCriterion::kModifiedAic);
  REQUIRE(cfg.fixed_lag == 3);
  REQUIRE(cfg.fixed_rank == 2);
  REQUIRE(cfg.max_lag_candidates == 8);
  REQUIRE(cfg.smoothing_ratio == 0.0);  // "auto" -> profile choice
  REQUIRE(cfg.bootstrap_replications == 250);
  REQUIRE(cfg.bootstrap_coverage == 0.8);
  REQUIRE(cfg.seed == 97);
  REQUIRE(cfg.threads == 2);
}

TEST_CASE("config parser names the offending line") {
  std::istringstream unknown("input = x\nwhat = 3\n");
  REQUIRE_THROWS_WITH(parse_pipeline_config(unknown), ContainsSubstring("line 2"));

  std::istringstream missing_eq("input\n");
  REQUIRE_THROWS_AS(parse_pipeline_config(missing_eq), ParseError);

  std::istringstream bad_value("coverage = huge\n");
  REQUIRE_THROWS_WITH(parse_pipeline_config(bad_value), ContainsSubstring("coverage"));
}

TEST_CASE("config validation enforces ranges") {
  TempDir dir("cfg");
  const std::string input = write_panel(dir, "bivariate", 1);

  PipelineConfig cfg = base_config(input, dir.file("out"));
  REQUIRE_NOTHROW(cfg.validate());

  SECTION("missing input") {
    cfg.input_path = dir.file("absent.csv");
    REQUIRE_THROWS_AS(cfg.validate(), Error);
  }
  SECTION("empty output dir") {
    cfg.output_dir = "";
    REQUIRE_THROWS_AS(cfg.validate(), Error);
  }
  SECTION("bootstrap too small") {
    cfg.bootstrap_replications = 50;
    REQUIRE_THROWS_WITH(cfg.validate(), ContainsSubstring("100"));
  }
  SECTION("coverage out of range") {
    cfg.bootstrap_coverage = 1.0;
    REQUIRE_THROWS_AS(cfg.validate(), ParameterError);
  }
  SECTION("bad period") {
    cfg.imputation_period_months = 0;
    REQUIRE_THROWS_AS(cfg.validate(), ParameterError);
  }
}

TEST_CASE("pipeline writes its six outputs and a coherent manifest") {
  TempDir dir("run");
  const std::string input = write_panel(dir, "baseline", 7);
  const PipelineConfig cfg = base_config(input, dir.file("out"));

  std::ostringstream log;
  REQUIRE(run_pipeline(cfg, log) == PipelineStatus::kOk);
  for (const auto& name : kOutputs) {
    INFO(name);
    REQUIRE(fs::exists(dir.file("out/" + name)));
  }

  const auto manifest = nlohmann::json::parse(read_file(dir.file("out/manifest.json")));
  REQUIRE(manifest["tool"]["name"] == "tvvecm");
  REQUIRE(manifest["selected"]["lag_order"] == 2);
  REQUIRE(manifest["selected"]["rank"] == 3);
  REQUIRE(manifest["config"]["seed"] == 11);
  REQUIRE(manifest["outputs"].size() == kOutputs.size());

  // zeta.csv has one row per fitted month plus a header.
  std::istringstream zeta(read_file(dir.file("out/zeta.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(zeta, line)) ++lines;
  REQUIRE(lines == 1 + 618);  // 620 periods, lag order 2
}

TEST_CASE("pipeline reruns byte identically") {
  TempDir dir("det");
  const std::string input = write_panel(dir, "baseline", 21);
  const PipelineConfig cfg = base_config(input, dir.file("out"));

  std::ostringstream log;
  REQUIRE(run_pipeline(cfg, log) == PipelineStatus::kOk);
  std::map<std::string, std::string> first;
  for (const auto& name : kOutputs) first[name] = read_file(dir.file("out/" + name));

  REQUIRE(run_pipeline(cfg, log) == PipelineStatus::kOk);
  for (const auto& name : kOutputs) {
    INFO(name);
    REQUIRE(read_file(dir.file("out/" + name)) == first[name]);
  }
}

TEST_CASE("output directory override through the environment") {
  TempDir dir("env");
  const std::string input = write_panel(dir, "baseline", 7);
  PipelineConfig cfg = base_config(input, dir.file("ignored"));

  ::setenv("TVVECM_OUTDIR", dir.file("redirected").c_str(), 1);
  std::ostringstream log;
  const PipelineStatus status = run_pipeline(cfg, log);
  ::unsetenv("TVVECM_OUTDIR");

  REQUIRE(status == PipelineStatus::kOk);
  REQUIRE(fs::exists(dir.file("redirected/zeta.csv")));
  REQUIRE_FALSE(fs::exists(dir.file("ignored/zeta.csv")));
}

TEST_CASE("stationary levels abort with the dedicated status") {
  TempDir dir("stat");
  // Strongly mean-reverting levels: the unit-root screen must reject.
  Rng rng(31);
  PricePanel panel;
  panel.names = {"a", "b"};
  panel.start = YearMonth{1900, 1};
  panel.values.resize(400, 2);
  for (Eigen::Index j = 0; j < 2; ++j) {
    double prev = 0.0;
    for (Eigen::Index t = 0; t < 400; ++t) {
      prev = 0.2 * prev + 0.05 * rng.normal();
      panel.values(t, j) = 100.0 * std::exp(prev);
    }
  }
  panel.observed = BoolGrid::Constant(400, 2, true);
  const std::string input = dir.file("stationary.csv");
  emit_csv_file(panel, input);

  std::ostringstream log;
  const PipelineStatus status = run_pipeline(base_config(input, dir.file("out")), log);
  REQUIRE(status == PipelineStatus::kUnitRootContradiction);
  REQUIRE_THAT(log.str(), ContainsSubstring("unit-root"));
}

TEST_CASE("rank zero aborts with the cointegration status") {
  TempDir dir("rank0");
  const std::string input = write_panel(dir, "independent", 5);
  PipelineConfig cfg = base_config(input, dir.file("out"));
  cfg.fixed_lag = 1;

  std::ostringstream log;
  REQUIRE(run_pipeline(cfg, log) == PipelineStatus::kCointegrationError);
  REQUIRE_FALSE(fs::exists(dir.file("out/zeta.csv")));
}

TEST_CASE("missing input is a config failure") {
  TempDir dir("miss");
  const PipelineConfig cfg = base_config(dir.file("absent.csv"), dir.file("out"));
  std::ostringstream log;
  REQUIRE(run_pipeline(cfg, log) == PipelineStatus::kConfigError);
}

TEST_CASE("robustness run writes the bivariate table") {
  TempDir dir("rob");
  const SynthResult r = generate(make_scenario("bivariate", 9));
  AnnualSeries a{"speed", 1881, r.panel.values.col(0)};
  AnnualSeries b{"freight", 1881, r.panel.values.col(1)};
  write_annual_csv_file(a, dir.file("speed.csv"));
  write_annual_csv_file(b, dir.file("freight.csv"));

  std::ostringstream log;
  REQUIRE(run_robustness(dir.file("speed.csv"), dir.file("freight.csv"),
                         dir.file("table5.csv"), log) == PipelineStatus::kOk);
  REQUIRE(fs::exists(dir.file("table5.csv")));

  SECTION("unequal spans fail in the fit stage") {
    AnnualSeries shifted = b;
    shifted.first_year = 1890;
    write_annual_csv_file(shifted, dir.file("shifted.csv"));
    REQUIRE(run_robustness(dir.file("speed.csv"), dir.file("shifted.csv"),
                           dir.file("bad.csv"), log) == PipelineStatus::kVecmError);
  }
  SECTION("unreadable input fails in the ingest stage") {
    REQUIRE(run_robustness(dir.file("nothere.csv"), dir.file("freight.csv"),
                           dir.file("bad.csv"), log) == PipelineStatus::kIngestError);
  }
}
