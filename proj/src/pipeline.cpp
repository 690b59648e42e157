#include "tvvecm/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tvvecm/csv.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/johansen.hpp"
#include "tvvecm/panel.hpp"
#include "tvvecm/report.hpp"
#include "tvvecm/svg.hpp"
#include "tvvecm/tv_vecm.hpp"
#include "tvvecm/vecm.hpp"
#include "tvvecm/version.hpp"

namespace tvvecm {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.begin();
  auto end = s.end();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end != begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  return std::string(begin, end);
}

[[noreturn]] void bad_value(int line_no, const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ParseError("line " + std::to_string(line_no) + ": key '" + key + "' expects " +
                   expected + ", got '" + value + "'");
}

long long parse_integer(int line_no, const std::string& key, const std::string& value) {
  long long out = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) bad_value(line_no, key, value, "an integer");
  return out;
}

double parse_real(int line_no, const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!parse_number(value, out)) bad_value(line_no, key, value, "a number");
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (input_path.empty()) throw ParameterError("input path is required");
  if (!std::filesystem::exists(input_path)) {
    throw ParameterError("input path does not resolve: " + input_path);
  }
  if (output_dir.empty()) throw ParameterError("output directory is required");
  if (imputation_period_months < 1) {
    throw ParameterError("imputation period must be at least 1 month");
  }
  if (max_lag_candidates < 1) {
    throw ParameterError("lag search bound must be at least 1");
  }
  if (fixed_lag.has_value() && *fixed_lag < 1) {
    throw ParameterError("fixed lag order must be at least 1");
  }
  if (fixed_rank.has_value() && *fixed_rank < 0) {
    throw ParameterError("fixed rank cannot be negative");
  }
  if (bootstrap_replications < 100) {
    throw ParameterError("bootstrap needs at least 100 replications, got " +
                         std::to_string(bootstrap_replications));
  }
  if (!(bootstrap_coverage > 0.0) || !(bootstrap_coverage < 1.0)) {
    throw ParameterError("band coverage must lie strictly between 0 and 1");
  }
}

PipelineConfig parse_pipeline_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected `key = value`, got '" +
                       stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": missing key before '='");
    }
    if (value.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": key '" + key +
                       "' has no value");
    }

    if (key == "input") {
      cfg.input_path = value;
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "imputation_period") {
      cfg.imputation_period_months = static_cast<int>(parse_integer(line_no, key, value));
    } else if (key == "detrend") {
      try {
        cfg.detrend_case = detrend_from_string(value);
      } catch (const Error&) {
        bad_value(line_no, key, value, "'constant' or 'trend'");
      }
    } else if (key == "lag_criterion") {
      try {
        cfg.lag_criterion = lag_criterion_from_string(value);
      } catch (const Error&) {
        bad_value(line_no, key, value, "'maic' or 'mbic'");
      }
    } else if (key == "lag") {
      cfg.fixed_lag = static_cast<int>(parse_integer(line_no, key, value));
    } else if (key == "rank") {
      cfg.fixed_rank = static_cast<int>(parse_integer(line_no, key, value));
    } else if (key == "max_lag") {
      cfg.max_lag_candidates = static_cast<int>(parse_integer(line_no, key, value));
    } else if (key == "lambda") {
      cfg.smoothing_ratio = value == "auto" ? 0.0 : parse_real(line_no, key, value);
    } else if (key == "bootstrap_reps") {
      cfg.bootstrap_replications = static_cast<int>(parse_integer(line_no, key, value));
    } else if (key == "coverage") {
      cfg.bootstrap_coverage = parse_real(line_no, key, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_integer(line_no, key, value));
    } else if (key == "threads") {
      const auto v = parse_integer(line_no, key, value);
      if (v < 0) bad_value(line_no, key, value, "a non-negative integer");
      cfg.threads = static_cast<unsigned>(v);
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

PipelineConfig parse_pipeline_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  return parse_pipeline_config(in);
}

namespace {

/// Removes every file written so far; used when a late stage fails.
void remove_outputs(const std::vector<std::string>& written) {
  for (const auto& file : written) {
    std::error_code ec;
    std::filesystem::remove(file, ec);
  }
}

void report(std::ostream& log, const std::string& stage, const std::exception& error,
            const std::string& hint) {
  log << stage << ": " << error.what() << "\n";
  if (!hint.empty()) log << "  hint: " << hint << "\n";
}

nlohmann::json config_json(const PipelineConfig& cfg) {
  nlohmann::json j;
  j["input"] = cfg.input_path;
  j["output_dir"] = cfg.output_dir;
  j["imputation_period"] = cfg.imputation_period_months;
  j["detrend"] = to_string(cfg.detrend_case);
  j["lag_criterion"] = to_string(cfg.lag_criterion);
  if (cfg.fixed_lag.has_value()) j["lag"] = *cfg.fixed_lag;
  if (cfg.fixed_rank.has_value()) j["rank"] = *cfg.fixed_rank;
  j["max_lag"] = cfg.max_lag_candidates;
  j["lambda"] = cfg.smoothing_ratio;
  j["bootstrap_reps"] = cfg.bootstrap_replications;
  j["coverage"] = cfg.bootstrap_coverage;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j;
}

}  // namespace

PipelineStatus run_pipeline(const PipelineConfig& config, std::ostream& log) {
  PipelineConfig cfg = config;
  if (const char* outdir = std::getenv("TVVECM_OUTDIR"); outdir != nullptr && *outdir != '\0') {
    cfg.output_dir = outdir;
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    report(log, "config", e, "see the configuration key list in the README");
    return PipelineStatus::kConfigError;
  }

  PricePanel raw;
  try {
    raw = ingest_csv_file(cfg.input_path);
  } catch (const std::exception& e) {
    report(log, "ingest", e,
           "the input must be a monthly table: header `month,<series...>`, strictly "
           "increasing YYYY-MM rows, positive prices, empty cells for missing values");
    return PipelineStatus::kIngestError;
  }

  PricePanel filled;
  try {
    filled = impute(raw, cfg.imputation_period_months);
  } catch (const std::exception& e) {
    report(log, "impute", e,
           "every series needs at least three full seasonal cycles of observed values");
    return PipelineStatus::kImputeError;
  }

  LogPanel logs;
  DiffPanel diffs;
  try {
    logs = to_logs(filled);
    diffs = difference(logs);
  } catch (const std::exception& e) {
    report(log, "transform", e, "prices must be strictly positive and fully imputed");
    return PipelineStatus::kTransformError;
  }

  std::vector<AdfGlsResult> level_tests;
  std::vector<AdfGlsResult> diff_tests;
  try {
    for (Eigen::Index j = 0; j < logs.values.cols(); ++j) {
      level_tests.push_back(adf_gls(logs.values.col(j), cfg.detrend_case, cfg.lag_criterion));
      diff_tests.push_back(adf_gls(diffs.values.col(j), cfg.detrend_case, cfg.lag_criterion));
    }
  } catch (const std::exception& e) {
    report(log, "unit-root screen", e, "the sample may be too short for the lag search");
    return PipelineStatus::kUnitRootContradiction;
  }
  const bool all_levels_reject =
      std::all_of(level_tests.begin(), level_tests.end(),
                  [](const AdfGlsResult& t) { return t.reject_1pct; });
  if (all_levels_reject) {
    log << "unit-root screen: every level series rejects a unit root at the 1% level\n"
        << "  hint: stationary levels leave nothing to cointegrate; check that the input "
           "holds prices rather than returns\n";
    return PipelineStatus::kUnitRootContradiction;
  }
  for (std::size_t j = 0; j < diff_tests.size(); ++j) {
    if (!diff_tests[j].reject_1pct) {
      log << "note: differenced series '" << logs.names[j]
          << "' does not reject a unit root at the 1% level; treating it as I(1) anyway\n";
    }
  }

  int lag_order = 0;
  CointegrationResult coint;
  try {
    lag_order = cfg.fixed_lag.has_value() ? *cfg.fixed_lag
                                          : select_lag_bic(diffs, logs, cfg.max_lag_candidates);
    coint = johansen(diffs, logs, lag_order, cfg.fixed_rank);
  } catch (const std::exception& e) {
    report(log, "rank test", e, "try a smaller lag bound or a longer sample");
    return PipelineStatus::kCointegrationError;
  }
  if (coint.selected_rank == 0) {
    log << "rank test: no cointegrating relation at the 1% level\n"
        << "  hint: without a long-run relation the speed index is undefined; "
           "force `rank` explicitly only if you have outside grounds for one\n";
    return PipelineStatus::kCointegrationError;
  }

  VecmFit fit;
  try {
    fit = fit_vecm(diffs, logs, lag_order, coint.beta);
  } catch (const std::exception& e) {
    report(log, "error-correction fit", e, "");
    return PipelineStatus::kVecmError;
  }

  TvVecmFit tv;
  double lambda = cfg.smoothing_ratio;
  try {
    if (!(lambda > 0.0)) {
      lambda = profile_smoothing_ratio(diffs, logs, lag_order, coint.beta);
      log << "smoothing ratio chosen by profile likelihood: " << format_number(lambda)
          << "\n";
    }
    tv = fit_tv_vecm(diffs, logs, lag_order, coint.beta, lambda);
  } catch (const std::exception& e) {
    report(log, "time-varying fit", e, "");
    return PipelineStatus::kTvVecmError;
  }

  IntegrationSpeedPath speed;
  try {
    speed = bootstrap_bands(tv, diffs, logs, cfg.bootstrap_replications,
                            cfg.bootstrap_coverage, cfg.seed, cfg.threads);
  } catch (const std::exception& e) {
    report(log, "bootstrap", e,
           "a diverging replication usually means the fitted system is explosive; "
           "try a larger lambda");
    return PipelineStatus::kBootstrapError;
  }

  std::vector<std::string> written;
  try {
    std::filesystem::create_directories(cfg.output_dir);
    const auto out = [&](const std::string& name) {
      return (std::filesystem::path(cfg.output_dir) / name).string();
    };

    written.push_back(out("table1.csv"));
    write_table_file(build_descriptives_table(logs, diffs, level_tests, diff_tests),
                     written.back());
    written.push_back(out("table2.csv"));
    write_table_file(build_rank_table(coint), written.back());
    written.push_back(out("table3.csv"));
    write_table_file(build_coefficient_table(fit), written.back());
    written.push_back(out("zeta.csv"));
    write_table_file(build_speed_table(speed), written.back());
    written.push_back(out("zeta.svg"));
    write_speed_svg_file(speed, written.back());

    nlohmann::json manifest;
    manifest["tool"] = {{"name", "tvvecm"}, {"version", kVersion}};
    manifest["config"] = config_json(cfg);
    manifest["selected"] = {
        {"lag_order", lag_order},
        {"rank", coint.selected_rank},
        {"lambda", lambda},
        {"effective_sample", tv.effective_sample},
        {"series", logs.names},
        {"first_fitted_month", format_year_month(tv.first_month)},
    };
    manifest["outputs"] = {"table1.csv", "table2.csv", "table3.csv",
                           "zeta.csv",   "zeta.svg",   "manifest.json"};
    written.push_back(out("manifest.json"));
    write_file(written.back(), manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    remove_outputs(written);
    report(log, "output", e, "is the output directory writable?");
    return PipelineStatus::kOutputError;
  }

  log << "wrote " << written.size() << " files to " << cfg.output_dir << "\n";
  return PipelineStatus::kOk;
}

PipelineStatus run_robustness(const std::string& speed_csv, const std::string& other_csv,
                              const std::string& out_path, std::ostream& log) {
  AnnualSeries first;
  AnnualSeries second;
  try {
    first = read_annual_csv_file(speed_csv);
    second = read_annual_csv_file(other_csv);
  } catch (const std::exception& e) {
    report(log, "ingest", e,
           "annual inputs use the header `year,<name>` with consecutive years");
    return PipelineStatus::kIngestError;
  }

  BivariateVecm biv;
  try {
    biv = fit_vecm_bivariate(first, second);
  } catch (const std::exception& e) {
    report(log, "bivariate fit", e,
           "both series need the same span and at least 20 overlapping years");
    return PipelineStatus::kVecmError;
  }

  try {
    if (const auto parent = std::filesystem::path(out_path).parent_path(); !parent.empty()) {
      std::filesystem::create_directories(parent);
    }
    write_table_file(build_bivariate_table(biv), out_path);
  } catch (const std::exception& e) {
    std::error_code ec;
    std::filesystem::remove(out_path, ec);
    report(log, "output", e, "is the output path writable?");
    return PipelineStatus::kOutputError;
  }
  return PipelineStatus::kOk;
}

}  // namespace tvvecm
