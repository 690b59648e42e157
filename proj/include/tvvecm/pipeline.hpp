#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "tvvecm/unit_root.hpp"

namespace tvvecm {

/// Everything a full pipeline run depends on.  A run is a pure function of
/// (config, input file, seed); echoing the config in the manifest therefore
/// reproduces every output byte for byte.
struct PipelineConfig {
  std::string input_path;
  std::string output_dir;

  int imputation_period_months = 12;
  Detrend detrend_case = Detrend::kConstantTrend;
  LagCriterion lag_criterion = LagCriterion::kModifiedBic;

  std::optional<int> fixed_lag;   ///< empty = choose by BIC
  std::optional<int> fixed_rank;  ///< empty = sequential 1% selection
  int max_lag_candidates = 6;     ///< BIC search upper bound

  double smoothing_ratio = 1.0;   ///< <= 0 means profile-likelihood choice
  int bootstrap_replications = 1000;
  double bootstrap_coverage = 0.90;
  std::uint64_t seed = 42;
  unsigned threads = 0;  ///< 0 = hardware concurrency

  /// Throws ParameterError / ParseError when a field is out of range or a
  /// path does not resolve.  Called by run_pipeline before any computation.
  void validate() const;
};

/// Stage-specific exit codes (also the process exit status of the CLI).
enum class PipelineStatus : int {
  kOk = 0,
  kConfigError = 2,
  kIngestError = 3,
  kImputeError = 4,
  kTransformError = 5,
  kUnitRootContradiction = 6,
  kCointegrationError = 7,
  kVecmError = 8,
  kTvVecmError = 9,
  kBootstrapError = 10,
  kOutputError = 11,
};

/// Parses the flat `key = value` config format (# starts a comment).  Keys
/// are listed in the README; unknown keys raise ParseError naming the line.
PipelineConfig parse_pipeline_config(std::istream& in);
PipelineConfig parse_pipeline_config_file(const std::string& path);

/// Runs ingest -> impute -> logs/diffs -> unit-root screen -> rank test ->
/// invariant fit -> time-varying fit -> speed index + bootstrap, writing
/// table1.csv, table2.csv, table3.csv, zeta.csv, zeta.svg and manifest.json
/// into cfg.output_dir.  On failure the stage name and a remediation hint go
/// to `log`, files written so far are removed, and the stage's status is
/// returned.
PipelineStatus run_pipeline(const PipelineConfig& cfg, std::ostream& log);

/// Table-5-style robustness run: reads two annual CSVs (equal span required),
/// fits the bivariate error-correction model on their logs and writes the
/// two-panel table to `out_path`.
PipelineStatus run_robustness(const std::string& speed_csv, const std::string& other_csv,
                              const std::string& out_path, std::ostream& log);

}  // namespace tvvecm
