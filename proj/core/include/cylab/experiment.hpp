#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cylab {

std::string version();

// Flat key = value configuration. Lists are comma separated.
struct ExperimentConfig {
  std::string experiment;
  int d = 3;
  double u = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t replicas = 100;
  std::uint64_t samples = 100000;
  int threads = 1;
  std::string out = "cylab-out";
  std::vector<double> r_list;
  std::vector<double> rho_list;
  double R = 1000.0;
  int m = 1;
  int n = 1;
};

const std::vector<std::string>& list_experiments();

// Threads from CYLAB_THREADS when set, otherwise 1.
int default_threads();

// Parses key = value lines; '#' starts a comment. Unknown keys raise ConfigError.
ExperimentConfig parse_config(const std::string& text);
// Reads either a key = value file or a manifest.json written by run_experiment.
ExperimentConfig load_config(const std::string& path);
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
// Canonical key = value text; parse_config(config_text(c)) reproduces c.
std::string config_text(const ExperimentConfig& cfg);
// Raises ConfigError for unknown experiments and out-of-domain parameters.
void validate(const ExperimentConfig& cfg);

struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  std::size_t points = 0;
};

// Least squares of log y on log x.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points);

struct ExperimentOutput {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Summary statistics and derived constants, in insertion order.
  std::vector<std::pair<std::string, double>> summary;

  double get(const std::string& key) const;
  std::vector<double> column(const std::string& name) const;
};

// Computes the experiment without touching the filesystem.
ExperimentOutput compute_experiment(const ExperimentConfig& cfg);

// Computes and writes cfg.out/results.csv and cfg.out/manifest.json. On
// failure both files are removed and the exception propagates.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

std::string format_csv(const ExperimentOutput& out);

// 2 for configuration and domain errors, 3 for numeric and other runtime failures.
int exit_code_for(const std::exception& e);

}  // namespace cylab
