#pragma once

#include <cstdio>
#include <string>

#include "cylab/experiment.hpp"

namespace cylab::detail {

ExperimentOutput run_normalization(const ExperimentConfig& cfg);
ExperimentOutput run_rhombus(const ExperimentConfig& cfg);
ExperimentOutput run_divergence(const ExperimentConfig& cfg);
ExperimentOutput run_ball_pair(const ExperimentConfig& cfg);
ExperimentOutput run_ball_cyl(const ExperimentConfig& cfg);
ExperimentOutput run_covariance(const ExperimentConfig& cfg);
ExperimentOutput run_lattice_sum(const ExperimentConfig& cfg);
ExperimentOutput run_chain_decay(const ExperimentConfig& cfg);
ExperimentOutput run_diameter3d(const ExperimentConfig& cfg);
ExperimentOutput run_diameter4d(const ExperimentConfig& cfg);
ExperimentOutput run_scaffold_audit(const ExperimentConfig& cfg);
ExperimentOutput run_angle_claim(const ExperimentConfig& cfg);
ExperimentOutput run_x_positive(const ExperimentConfig& cfg);

// Summary key with a grid label, e.g. tagged("mean", "rho", 10) -> "mean[rho=10]".
inline std::string tagged(const std::string& key, const std::string& name, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return key + "[" + name + "=" + buf + "]";
}

}  // namespace cylab::detail
