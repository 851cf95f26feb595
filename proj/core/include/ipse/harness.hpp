#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ipse/config.hpp"
#include "ipse/learner.hpp"

namespace ipse {

struct ExperimentConfig {
  std::vector<LearnerConfig> learners;
  int replications = 20;
  std::uint64_t master_seed = 0;
  int parallelism = 1;
  std::string output_dir = "out";
};

/// Builds an experiment from a flat key/value config. Throws listing every
/// unknown key; missing keys take the desk-scale defaults.
ExperimentConfig experiment_from_config(const KeyValueConfig& cfg);

/// Divides by |beta[rows_with_holes]| so that reported weight vectors share a
/// common normalization. Returns the (possibly unscaled) vector and whether
/// the rescaling was applied (false when the normalizer is zero).
std::pair<Eigen::VectorXd, bool> rescale_weights_for_report(
    const Eigen::VectorXd& beta);

struct ExperimentResult {
  bool ok = true;  // false when any replication aborted
  std::vector<LearningTrace> traces;  // ordered variant-major
};

/// Runs every (variant x replication) on independent derived RNG streams,
/// then writes learning_curve.csv, weights.csv, directions.csv and meter.csv
/// into output_dir. Output is byte-identical for identical (seed, config).
ExperimentResult run_experiment(const ExperimentConfig& config);

/// CSV formatting shared by the harness and the CLI one-shot subcommands.
std::string format_double(double v);
std::string weights_csv_header();
std::string features_csv_header();

}  // namespace ipse
