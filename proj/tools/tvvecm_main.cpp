// Command-line front end: each subcommand exposes one pipeline stage, and
// `pipeline` runs them end to end.  Exit codes follow PipelineStatus so shell
// scripts can tell stages apart.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tvvecm/csv.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/johansen.hpp"
#include "tvvecm/panel.hpp"
#include "tvvecm/pipeline.hpp"
#include "tvvecm/report.hpp"
#include "tvvecm/svg.hpp"
#include "tvvecm/synth.hpp"
#include "tvvecm/tv_vecm.hpp"
#include "tvvecm/unit_root.hpp"
#include "tvvecm/vecm.hpp"
#include "tvvecm/version.hpp"

namespace {

using tvvecm::PipelineStatus;

/// Carries a stage exit code out of a helper after the error is printed.
struct StageFailure {
  int code;
};

[[noreturn]] void fail(PipelineStatus status, const std::string& stage,
                       const std::string& what) {
  std::cerr << stage << ": " << what << "\n";
  throw StageFailure{static_cast<int>(status)};
}

struct LoadedPanel {
  tvvecm::PricePanel filled;
  tvvecm::LogPanel logs;
  tvvecm::DiffPanel diffs;
};

LoadedPanel load_panel(const std::string& input, int period) {
  tvvecm::PricePanel raw;
  try {
    raw = tvvecm::ingest_csv_file(input);
  } catch (const std::exception& e) {
    fail(PipelineStatus::kIngestError, "ingest", e.what());
  }
  LoadedPanel out;
  try {
    out.filled = tvvecm::impute(raw, period);
  } catch (const std::exception& e) {
    fail(PipelineStatus::kImputeError, "impute", e.what());
  }
  try {
    out.logs = tvvecm::to_logs(out.filled);
    out.diffs = tvvecm::difference(out.logs);
  } catch (const std::exception& e) {
    fail(PipelineStatus::kTransformError, "transform", e.what());
  }
  return out;
}

void write_output(const tvvecm::Table& table, const std::string& path) {
  try {
    if (path.empty()) {
      tvvecm::write_table(table, std::cout);
    } else {
      tvvecm::write_table_file(table, path);
    }
  } catch (const std::exception& e) {
    fail(PipelineStatus::kOutputError, "output", e.what());
  }
}

/// "auto" -> 0 (select by BIC); otherwise a positive integer.
int parse_lag_option(const std::string& text) {
  if (text == "auto") return 0;
  double v = 0.0;
  if (!tvvecm::parse_number(text, v) || v != static_cast<int>(v) || v < 1.0) {
    fail(PipelineStatus::kConfigError, "config",
         "--lags expects a positive integer or `auto`, got '" + text + "'");
  }
  return static_cast<int>(v);
}

int pick_lag(const LoadedPanel& panel, int lag, int max_lag) {
  try {
    return lag > 0 ? lag : tvvecm::select_lag_bic(panel.diffs, panel.logs, max_lag);
  } catch (const std::exception& e) {
    fail(PipelineStatus::kCointegrationError, "lag selection", e.what());
  }
}

double pick_lambda(const LoadedPanel& panel, const std::string& lambda_text, int lag,
                   const Eigen::MatrixXd& beta) {
  if (lambda_text == "auto") {
    try {
      const double lambda =
          tvvecm::profile_smoothing_ratio(panel.diffs, panel.logs, lag, beta);
      std::cerr << "smoothing ratio chosen by profile likelihood: "
                << tvvecm::format_number(lambda) << "\n";
      return lambda;
    } catch (const std::exception& e) {
      fail(PipelineStatus::kTvVecmError, "smoothing profile", e.what());
    }
  }
  double lambda = 0.0;
  if (!tvvecm::parse_number(lambda_text, lambda) || !(lambda > 0.0)) {
    fail(PipelineStatus::kConfigError, "config",
         "--lambda expects a positive number or `auto`, got '" + lambda_text + "'");
  }
  return lambda;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying market-integration toolkit"};
  app.set_version_flag("--version", std::string(tvvecm::kVersion));
  app.require_subcommand(1);

  // ---- ingest ----------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "read a monthly price CSV and fill gaps");
  std::string ingest_input;
  std::string ingest_output;
  int ingest_period = 12;
  ingest->add_option("input,--input", ingest_input, "monthly price CSV")->required();
  ingest->add_option("--output", ingest_output, "completed CSV (default stdout)");
  ingest->add_option("--period", ingest_period, "seasonal period in months")->capture_default_str();

  // ---- unitroot --------------------------------------------------------
  auto* unitroot = app.add_subcommand("unitroot", "descriptives and the unit-root screen");
  std::string ur_input;
  std::string ur_output;
  std::string ur_detrend = "trend";
  std::string ur_criterion = "mbic";
  int ur_period = 12;
  int ur_max_lags = -1;
  unitroot->add_option("input,--input", ur_input, "monthly price CSV")->required();
  unitroot->add_option("--output", ur_output, "table CSV (default stdout)");
  unitroot->add_option("--detrend", ur_detrend, "constant|trend")->capture_default_str();
  unitroot->add_option("--criterion", ur_criterion, "maic|mbic")->capture_default_str();
  unitroot->add_option("--period", ur_period, "seasonal period in months")->capture_default_str();
  unitroot->add_option("--max-lags", ur_max_lags, "lag search bound (-1 = rule of thumb)")->capture_default_str();

  // ---- coint -----------------------------------------------------------
  auto* coint = app.add_subcommand("coint", "cointegration rank test");
  std::string coint_input;
  std::string coint_output;
  std::string coint_lag = "auto";
  int coint_period = 12;
  int coint_max_lag = 6;
  int coint_rank = -1;
  coint->add_option("input,--input", coint_input, "monthly price CSV")->required();
  coint->add_option("--output", coint_output, "rank table CSV (default stdout)");
  coint->add_option("--period", coint_period, "seasonal period in months")->capture_default_str();
  coint->add_option("--lags,--lag", coint_lag, "VAR order, or `auto` for BIC")->capture_default_str();
  coint->add_option("--max-lag", coint_max_lag, "BIC search bound")->capture_default_str();
  coint->add_option("--rank", coint_rank, "force the rank (-1 = sequential test)")->capture_default_str();

  // ---- vecm ------------------------------------------------------------
  auto* vecm = app.add_subcommand("vecm", "time-invariant error-correction fit");
  std::string vecm_input;
  std::string vecm_output;
  std::string vecm_lag = "auto";
  int vecm_period = 12;
  int vecm_max_lag = 6;
  int vecm_rank = -1;
  bool vecm_unrestricted = false;
  vecm->add_option("input,--input", vecm_input, "monthly price CSV")->required();
  vecm->add_option("--output", vecm_output, "coefficient table CSV (default stdout)");
  vecm->add_option("--period", vecm_period, "seasonal period in months")->capture_default_str();
  vecm->add_option("--lags,--lag", vecm_lag, "VAR order, or `auto` for BIC")->capture_default_str();
  vecm->add_option("--max-lag", vecm_max_lag, "BIC search bound")->capture_default_str();
  vecm->add_option("--rank", vecm_rank, "force the rank (-1 = sequential test)")->capture_default_str();
  vecm->add_flag("--unrestricted", vecm_unrestricted,
                 "fit the long-run matrix freely instead of through the tested relations");

  // ---- tvvecm ----------------------------------------------------------
  auto* tv = app.add_subcommand("tvvecm", "time-varying fit and the speed index");
  std::string tv_input;
  std::string tv_output;
  std::string tv_svg;
  std::string tv_lambda = "1.0";
  std::string tv_lag = "auto";
  int tv_period = 12;
  int tv_max_lag = 6;
  int tv_rank = -1;
  int tv_reps = 0;
  double tv_coverage = 0.90;
  std::uint64_t tv_seed = 42;
  unsigned tv_threads = 0;
  tv->add_option("input,--input", tv_input, "monthly price CSV")->required();
  tv->add_option("--output", tv_output, "speed-index CSV (default stdout)");
  tv->add_option("--svg", tv_svg, "also draw the index to this SVG file");
  tv->add_option("--lambda", tv_lambda, "smoothing ratio, or `auto`")->capture_default_str();
  tv->add_option("--period", tv_period, "seasonal period in months")->capture_default_str();
  tv->add_option("--lags,--lag", tv_lag, "VAR order, or `auto` for BIC")->capture_default_str();
  tv->add_option("--max-lag", tv_max_lag, "BIC search bound")->capture_default_str();
  tv->add_option("--rank", tv_rank, "force the rank (-1 = sequential test)")->capture_default_str();
  tv->add_option("--bootstrap,--reps", tv_reps, "bootstrap replications (0 = no bands)")->capture_default_str();
  tv->add_option("--coverage", tv_coverage, "pointwise band coverage")->capture_default_str();
  tv->add_option("--seed", tv_seed, "bootstrap seed")->capture_default_str();
  tv->add_option("--threads", tv_threads, "worker threads (0 = all cores)")->capture_default_str();

  // ---- synth -----------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "simulate a synthetic panel");
  std::string synth_scenario = "baseline";
  std::string synth_output;
  std::string synth_truth;
  std::uint64_t synth_seed = 1;
  bool synth_list = false;
  synth->add_option("--scenario", synth_scenario, "preset name")->capture_default_str();
  synth->add_option("--out,--output", synth_output, "panel CSV (default stdout)");
  synth->add_option("--truth", synth_truth, "also write the true speed path CSV here");
  synth->add_option("--seed", synth_seed, "simulation seed")->capture_default_str();
  synth->add_flag("--list", synth_list, "list the presets and exit");

  // ---- pipeline --------------------------------------------------------
  auto* pipe = app.add_subcommand("pipeline", "run every stage and write the report files");
  std::string pipe_config;
  std::string pipe_input;
  std::string pipe_outdir;
  std::string pipe_lambda;
  std::string pipe_detrend;
  std::string pipe_criterion;
  int pipe_period = -1;
  int pipe_lag = 0;
  int pipe_max_lag = -1;
  int pipe_rank = -1;
  int pipe_reps = -1;
  double pipe_coverage = -1.0;
  std::int64_t pipe_seed = -1;
  int pipe_threads = -1;
  pipe->add_option("--config", pipe_config, "`key = value` configuration file");
  pipe->add_option("--input", pipe_input, "monthly price CSV (overrides the config)");
  pipe->add_option("--outdir", pipe_outdir, "output directory (overrides the config)");
  pipe->add_option("--lambda", pipe_lambda, "smoothing ratio, or `auto`");
  pipe->add_option("--detrend", pipe_detrend, "constant|trend");
  pipe->add_option("--criterion", pipe_criterion, "maic|mbic");
  pipe->add_option("--period", pipe_period, "seasonal period in months");
  pipe->add_option("--lag", pipe_lag, "force the VAR order");
  pipe->add_option("--max-lag", pipe_max_lag, "BIC search bound");
  pipe->add_option("--rank", pipe_rank, "force the rank");
  pipe->add_option("--reps", pipe_reps, "bootstrap replications");
  pipe->add_option("--coverage", pipe_coverage, "pointwise band coverage");
  pipe->add_option("--seed", pipe_seed, "bootstrap seed");
  pipe->add_option("--threads", pipe_threads, "worker threads (0 = all cores)");

  // ---- robustness ------------------------------------------------------
  auto* robust = app.add_subcommand("robustness", "bivariate annual cross-check");
  std::string robust_first;
  std::string robust_second;
  std::string robust_output;
  robust->add_option("--first", robust_first, "annual CSV (year,<name>)")->required();
  robust->add_option("--second", robust_second, "annual CSV (year,<name>)")->required();
  robust->add_option("--output", robust_output, "two-panel table CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      const auto panel = load_panel(ingest_input, ingest_period);
      try {
        if (ingest_output.empty()) {
          tvvecm::emit_csv(panel.filled, std::cout);
        } else {
          tvvecm::emit_csv_file(panel.filled, ingest_output);
        }
      } catch (const std::exception& e) {
        fail(PipelineStatus::kOutputError, "output", e.what());
      }
      return 0;
    }

    if (*unitroot) {
      tvvecm::Detrend detrend{};
      tvvecm::LagCriterion criterion{};
      try {
        detrend = tvvecm::detrend_from_string(ur_detrend);
        criterion = tvvecm::lag_criterion_from_string(ur_criterion);
      } catch (const std::exception& e) {
        fail(PipelineStatus::kConfigError, "config", e.what());
      }
      const auto panel = load_panel(ur_input, ur_period);
      std::vector<tvvecm::AdfGlsResult> level_tests;
      std::vector<tvvecm::AdfGlsResult> diff_tests;
      try {
        const std::optional<int> max_lags =
            ur_max_lags >= 0 ? std::optional<int>(ur_max_lags) : std::nullopt;
        for (Eigen::Index j = 0; j < panel.logs.values.cols(); ++j) {
          level_tests.push_back(
              tvvecm::adf_gls(panel.logs.values.col(j), detrend, criterion, max_lags));
          diff_tests.push_back(
              tvvecm::adf_gls(panel.diffs.values.col(j), detrend, criterion, max_lags));
        }
      } catch (const std::exception& e) {
        fail(PipelineStatus::kUnitRootContradiction, "unit-root screen", e.what());
      }
      write_output(tvvecm::build_descriptives_table(panel.logs, panel.diffs, level_tests,
                                                    diff_tests),
                   ur_output);
      return 0;
    }

    if (*coint) {
      const auto panel = load_panel(coint_input, coint_period);
      const int lag = pick_lag(panel, parse_lag_option(coint_lag), coint_max_lag);
      tvvecm::CointegrationResult result;
      try {
        const std::optional<int> rank =
            coint_rank >= 0 ? std::optional<int>(coint_rank) : std::nullopt;
        result = tvvecm::johansen(panel.diffs, panel.logs, lag, rank);
      } catch (const std::exception& e) {
        fail(PipelineStatus::kCointegrationError, "rank test", e.what());
      }
      std::cerr << "lag order " << lag << ", selected rank " << result.selected_rank
                << "\n";
      write_output(tvvecm::build_rank_table(result), coint_output);
      return 0;
    }

    if (*vecm) {
      const auto panel = load_panel(vecm_input, vecm_period);
      const int lag = pick_lag(panel, parse_lag_option(vecm_lag), vecm_max_lag);
      tvvecm::VecmFit fit;
      try {
        std::optional<Eigen::MatrixXd> beta;
        if (!vecm_unrestricted) {
          const std::optional<int> rank =
              vecm_rank >= 0 ? std::optional<int>(vecm_rank) : std::nullopt;
          beta = tvvecm::johansen(panel.diffs, panel.logs, lag, rank).beta;
        }
        fit = tvvecm::fit_vecm(panel.diffs, panel.logs, lag, beta);
      } catch (const std::exception& e) {
        fail(PipelineStatus::kVecmError, "error-correction fit", e.what());
      }
      write_output(tvvecm::build_coefficient_table(fit), vecm_output);
      return 0;
    }

    if (*tv) {
      const auto panel = load_panel(tv_input, tv_period);
      const int lag = pick_lag(panel, parse_lag_option(tv_lag), tv_max_lag);
      Eigen::MatrixXd beta;
      try {
        const std::optional<int> rank =
            tv_rank >= 0 ? std::optional<int>(tv_rank) : std::nullopt;
        const auto coint_result = tvvecm::johansen(panel.diffs, panel.logs, lag, rank);
        if (coint_result.selected_rank == 0) {
          throw tvvecm::DomainError("no cointegrating relation at the 1% level");
        }
        beta = coint_result.beta;
      } catch (const std::exception& e) {
        fail(PipelineStatus::kCointegrationError, "rank test", e.what());
      }
      const double lambda = pick_lambda(panel, tv_lambda, lag, beta);
      tvvecm::TvVecmFit fit;
      tvvecm::IntegrationSpeedPath path;
      try {
        fit = tvvecm::fit_tv_vecm(panel.diffs, panel.logs, lag, beta, lambda);
        path = tvvecm::integration_speed(fit);
      } catch (const std::exception& e) {
        fail(PipelineStatus::kTvVecmError, "time-varying fit", e.what());
      }
      if (tv_reps > 0) {
        try {
          path = tvvecm::bootstrap_bands(fit, panel.diffs, panel.logs, tv_reps, tv_coverage,
                                         tv_seed, tv_threads);
        } catch (const std::exception& e) {
          fail(PipelineStatus::kBootstrapError, "bootstrap", e.what());
        }
      }
      write_output(tvvecm::build_speed_table(path), tv_output);
      if (!tv_svg.empty()) {
        try {
          tvvecm::write_speed_svg_file(path, tv_svg);
        } catch (const std::exception& e) {
          fail(PipelineStatus::kOutputError, "output", e.what());
        }
      }
      return 0;
    }

    if (*synth) {
      if (synth_list) {
        for (const auto& name : tvvecm::scenario_presets()) std::cout << name << "\n";
        return 0;
      }
      tvvecm::SynthResult result;
      try {
        result = tvvecm::generate(tvvecm::make_scenario(synth_scenario, synth_seed));
      } catch (const std::exception& e) {
        fail(PipelineStatus::kConfigError, "synth", e.what());
      }
      try {
        if (synth_output.empty()) {
          tvvecm::emit_csv(result.panel, std::cout);
        } else {
          tvvecm::emit_csv_file(result.panel, synth_output);
        }
        if (!synth_truth.empty()) {
          tvvecm::Table truth;
          truth.header = {"date", "zeta"};
          for (Eigen::Index t = 0; t < result.true_zeta.size(); ++t) {
            truth.rows.push_back(
                {tvvecm::format_year_month(result.panel.start.plus_months(static_cast<int>(t))),
                 tvvecm::format_number(result.true_zeta[t])});
          }
          tvvecm::write_table_file(truth, synth_truth);
        }
      } catch (const std::exception& e) {
        fail(PipelineStatus::kOutputError, "output", e.what());
      }
      return 0;
    }

    if (*pipe) {
      tvvecm::PipelineConfig cfg;
      if (!pipe_config.empty()) {
        try {
          cfg = tvvecm::parse_pipeline_config_file(pipe_config);
        } catch (const std::exception& e) {
          fail(PipelineStatus::kConfigError, "config", e.what());
        }
      }
      try {
        if (pipe->count("--input") > 0) cfg.input_path = pipe_input;
        if (pipe->count("--outdir") > 0) cfg.output_dir = pipe_outdir;
        if (pipe->count("--period") > 0) cfg.imputation_period_months = pipe_period;
        if (pipe->count("--detrend") > 0) {
          cfg.detrend_case = tvvecm::detrend_from_string(pipe_detrend);
        }
        if (pipe->count("--criterion") > 0) {
          cfg.lag_criterion = tvvecm::lag_criterion_from_string(pipe_criterion);
        }
        if (pipe->count("--lag") > 0) cfg.fixed_lag = pipe_lag;
        if (pipe->count("--rank") > 0) cfg.fixed_rank = pipe_rank;
        if (pipe->count("--max-lag") > 0) cfg.max_lag_candidates = pipe_max_lag;
        if (pipe->count("--lambda") > 0) {
          if (pipe_lambda == "auto") {
            cfg.smoothing_ratio = 0.0;
          } else {
            double value = 0.0;
            if (!tvvecm::parse_number(pipe_lambda, value)) {
              throw tvvecm::ParseError("--lambda expects a number or `auto`, got '" +
                                       pipe_lambda + "'");
            }
            cfg.smoothing_ratio = value;
          }
        }
        if (pipe->count("--reps") > 0) cfg.bootstrap_replications = pipe_reps;
        if (pipe->count("--coverage") > 0) cfg.bootstrap_coverage = pipe_coverage;
        if (pipe->count("--seed") > 0) cfg.seed = static_cast<std::uint64_t>(pipe_seed);
        if (pipe->count("--threads") > 0) {
          cfg.threads = static_cast<unsigned>(pipe_threads);
        }
      } catch (const std::exception& e) {
        fail(PipelineStatus::kConfigError, "config", e.what());
      }
      return static_cast<int>(tvvecm::run_pipeline(cfg, std::cerr));
    }

    if (*robust) {
      return static_cast<int>(
          tvvecm::run_robustness(robust_first, robust_second, robust_output, std::cerr));
    }
  } catch (const StageFailure& failure) {
    return failure.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
