#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loosehc {

// Raised for malformed or inconsistent experiment configuration input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a configuration is well-formed but violates a module
// precondition (divisibility, size limits, parameter domains).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value experiment description.  Lists are comma-separated; '#'
// starts a comment; unknown keys are rejected.
struct ExperimentConfig {
  std::string kind;  // threshold-sweep | spoiled-stats | lambda-hamilton |
                     // matching-success | analysis-report

  std::vector<int> n;
  std::vector<int> k;
  std::vector<int> d;
  std::vector<int> kappa;
  std::vector<int> m;
  std::vector<double> p;
  std::vector<double> c;

  int trials = 100;
  std::uint64_t seed = 0;
  std::string out;

  // analysis-report extras.
  int grid_resolution = 400;
  std::string report_out;    // optional plain-text key=value report
  std::string grid_csv_out;  // optional CSV of grid values

  // lambda-hamilton exact-search size limits.
  int m_limit = 8;
  int d_limit = 8;

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_string(const std::string& text);

  // Kind-specific structural checks; throws ConfigError for malformed input
  // and PreconditionError for module-precondition violations.
  void validate() const;
};

struct RunOptions {
  int threads = 1;
  std::optional<int> trials_override;
  std::optional<std::uint64_t> seed_override;
};

// p = c (k-1)! log(n) / n^{k-1}, clamped to <= 1.
double threshold_probability(int n, int k, double c);

// Each runner returns the full CSV text: a "# generated <timestamp>" comment
// line, a header row, then one row per grid cell.  Rerunning with the same
// config and seed reproduces everything below the timestamp line exactly.
std::string run_threshold_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});
std::string run_spoiled_stats(const ExperimentConfig& cfg, const RunOptions& opts = {});
std::string run_lambda_hamilton(const ExperimentConfig& cfg, const RunOptions& opts = {});
std::string run_matching_success(const ExperimentConfig& cfg, const RunOptions& opts = {});
std::string run_analysis_report(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Dispatches on cfg.kind.
std::string run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// RFC-4180 field quoting (quotes only when the field needs it).
std::string csv_escape(const std::string& field);

// Drops the leading "# generated ..." line, for byte-exact comparisons.
std::string csv_strip_timestamp(const std::string& csv);

}  // namespace loosehc
