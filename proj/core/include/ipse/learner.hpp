#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipse/choice_model.hpp"
#include "ipse/evaluate.hpp"
#include "ipse/lfd.hpp"
#include "ipse/rollout.hpp"
#include "ipse/tetris/env.hpp"

namespace ipse {

enum class Variant {
  kMUnregularized,
  kMStewCv,
  kMStewSchedule,
  kMStewKnownDirections,
  kLfdOnly,
  kIpse,
};

std::string variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);
const std::vector<Variant>& all_variants();

struct LearnerConfig {
  Variant variant = Variant::kIpse;
  RolloutConfig rollout{};
  LfdConfig lfd{};
  double schedule_c = 5.0;  // lambda_k = c / k
  int window_cap = 100;
  int total_iterations = 400;
  int eval_every = 0;  // 0 disables out-of-band evaluation
  int eval_games = 30;
  std::int64_t eval_step_cap = 1'000'000;
  int cv_folds = 5;
  std::vector<double> cv_lambda_grid;  // empty -> default grid
};

/// Window of most recent training samples used at M-learning iteration k.
inline int window_size(int k, int cap = 100) { return std::min(cap, k / 2 + 2); }

/// Decreasing regularization schedule.
inline double lambda_schedule(int k, double c) { return c / k; }

enum class Phase { kLfd, kM };

struct TraceRow {
  int iteration = 0;  // 1-based, global across phases
  Phase phase = Phase::kM;
  Eigen::VectorXd beta;  // decided directions during the LFD phase
  double lambda = 0;
  int window = 0;
  std::uint64_t meter_delta = 0;
  bool fit_converged = true;
  bool fit_capped = false;
  std::optional<EvaluationResult> eval;
};

struct LearningTrace {
  Variant variant = Variant::kIpse;
  std::vector<TraceRow> rows;
  std::optional<LfdResult> lfd;  // present for lfd_only and ipse
  int transition_iteration = -1;  // first M iteration for ipse
  bool aborted = false;           // LFD iteration cap exhausted
};

/// Mutable state threaded through M-learning iterations.
struct MLearningState {
  tetris::BoardState board;
  Eigen::VectorXd beta;
  ChoiceDataset dataset;
  int k = 0;  // number of appended choice sets
};

struct MIterationInfo {
  double lambda = 0;
  int window = 0;
  bool appended = false;
  bool terminal = false;
  bool fit_converged = true;
  bool fit_capped = false;
};

/// One step of online rollout learning: pick an action by rollout with the
/// greedy policy, take it, and on a non-terminal transition append the choice
/// set and refit beta on the recent window with the variant's penalty.
MIterationInfo m_learning_iteration(const tetris::TetrisEnv& env,
                                    MLearningState& mstate,
                                    const LearnerConfig& config, Rng& rng,
                                    CallMeter& meter);

/// Runs one replication of any variant. The learning stream is derived from
/// (master_seed, variant, replication); each evaluation point gets its own
/// derived stream so evaluation never perturbs learning.
LearningTrace run_variant(const tetris::TetrisEnv& env,
                          const LearnerConfig& config,
                          std::uint64_t master_seed, std::uint64_t replication,
                          CallMeter& meter);

/// IPSE composition: direction learning first, then schedule-regularized
/// M-learning with the iteration counter restarted at the transition.
LearningTrace run_ipse(const tetris::TetrisEnv& env, const LearnerConfig& config,
                       std::uint64_t master_seed, std::uint64_t replication,
                       CallMeter& meter);

}  // namespace ipse
