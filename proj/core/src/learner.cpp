#include "ipse/learner.hpp"

#include <stdexcept>

namespace ipse {

namespace {

using tetris::TetrisEnv;
using tetris::kNumFeatures;

Eigen::VectorXd ones_directions() {
  return Eigen::VectorXd::Ones(kNumFeatures);
}

Eigen::VectorXd reference_directions() {
  Eigen::VectorXd d(kNumFeatures);
  auto signs = tetris::reference_direction_signs();
  for (int i = 0; i < kNumFeatures; ++i) d[i] = signs[i];
  return d;
}

std::uint64_t variant_index(Variant v) { return std::uint64_t(v); }

std::uint64_t learn_seed(std::uint64_t master, Variant v, std::uint64_t rep) {
  return derive_seed(master, variant_index(v), rep, 0);
}

// Evaluation streams mix in the (1-based) iteration; coordinate 0 is the
// learning stream.
std::uint64_t eval_seed(std::uint64_t master, Variant v, std::uint64_t rep,
                        int iteration) {
  return derive_seed(master, variant_index(v), rep, std::uint64_t(iteration));
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kMUnregularized: return "m_unregularized";
    case Variant::kMStewCv: return "m_stew_cv";
    case Variant::kMStewSchedule: return "m_stew_schedule";
    case Variant::kMStewKnownDirections: return "m_stew_known_directions";
    case Variant::kLfdOnly: return "lfd_only";
    case Variant::kIpse: return "ipse";
  }
  throw std::logic_error("unknown variant");
}

std::optional<Variant> variant_from_name(const std::string& name) {
  for (Variant v : all_variants())
    if (variant_name(v) == name) return v;
  return std::nullopt;
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> kAll = {
      Variant::kMUnregularized,     Variant::kMStewCv,
      Variant::kMStewSchedule,      Variant::kMStewKnownDirections,
      Variant::kLfdOnly,            Variant::kIpse};
  return kAll;
}

namespace {

struct MLearnerImpl {
  const TetrisEnv& env;
  const LearnerConfig& config;
  Eigen::VectorXd penalty_directions;

  PenaltySpec make_spec(const MLearningState& mstate, Rng& rng) const {
    PenaltySpec spec;
    switch (config.variant) {
      case Variant::kMUnregularized:
        spec.kind = PenaltyKind::kNone;
        return spec;
      case Variant::kMStewCv: {
        spec.kind = PenaltyKind::kStewDirected;
        spec.directions = penalty_directions;
        CvOptions cv;
        cv.folds = config.cv_folds;
        cv.lambda_grid = config.cv_lambda_grid;
        auto window = mstate.dataset.window(
            window_size(mstate.k, config.window_cap));
        spec.lambda = cross_validate_lambda(window, spec, cv, rng);
        return spec;
      }
      case Variant::kMStewSchedule:
      case Variant::kMStewKnownDirections:
      case Variant::kIpse:
        spec.kind = PenaltyKind::kStewDirected;
        spec.directions = penalty_directions;
        spec.lambda = lambda_schedule(std::max(mstate.k, 1), config.schedule_c);
        return spec;
      default:
        throw std::logic_error("make_spec: not an M-learning variant");
    }
  }

  MIterationInfo iterate(MLearningState& mstate, Rng& rng,
                         CallMeter& meter) const {
    GreedyPolicy<TetrisEnv> policy{
        std::span<const double>(mstate.beta.data(), size_t(mstate.beta.size()))};
    auto cands = env.candidates(mstate.board);
    auto choice =
        rollout_argmax(env, mstate.board, policy, config.rollout, rng, meter);
    auto outcome = env.step(mstate.board, choice.chosen, rng, meter);

    MIterationInfo info;
    if (outcome.terminal) {
      info.terminal = true;
      mstate.board = env.initial_state(rng);
      return info;
    }
    mstate.board = outcome.next;
    if (cands.size() < 2) return info;  // a choice set needs alternatives

    ChoiceSet set;
    set.chosen_index = choice.chosen_index;
    set.alternatives.resize(int(cands.size()), kNumFeatures);
    for (int a = 0; a < int(cands.size()); ++a)
      for (int i = 0; i < kNumFeatures; ++i)
        set.alternatives(a, i) = cands[a].features[i];
    mstate.dataset.append(std::move(set));
    ++mstate.k;
    info.appended = true;

    PenaltySpec spec = make_spec(mstate, rng);
    info.lambda = spec.lambda;
    info.window = window_size(mstate.k, config.window_cap);
    auto window = mstate.dataset.window(info.window);
    auto res = fit(window, spec, mstate.beta);
    mstate.beta = res.weights.beta;
    info.fit_converged = res.converged;
    info.fit_capped = res.norm_capped;
    return info;
  }
};

std::optional<EvaluationResult> maybe_eval(const TetrisEnv& env,
                                           const LearnerConfig& config,
                                           std::uint64_t master,
                                           std::uint64_t rep, int iteration,
                                           const Eigen::VectorXd& beta) {
  if (config.eval_every <= 0 || iteration % config.eval_every != 0)
    return std::nullopt;
  Rng rng = make_rng(eval_seed(master, config.variant, rep, iteration));
  return evaluate_policy(
      env, std::span<const double>(beta.data(), size_t(beta.size())),
      config.eval_games, rng, config.eval_step_cap);
}

Eigen::VectorXd directions_as_vector(const std::vector<int>& d) {
  Eigen::VectorXd v(int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) v[i] = d[i];
  return v;
}

// Converts an LFD trace into global trace rows (phase kLfd, beta = d).
void append_lfd_rows(LearningTrace& trace, const LfdResult& lfd,
                     const TetrisEnv& env, const LearnerConfig& config,
                     std::uint64_t master, std::uint64_t rep) {
  for (const auto& row : lfd.trace) {
    TraceRow out;
    out.iteration = row.iteration;
    out.phase = Phase::kLfd;
    out.beta = directions_as_vector(row.direction);
    out.meter_delta = row.meter_delta;
    out.eval = maybe_eval(env, config, master, rep, out.iteration, out.beta);
    trace.rows.push_back(std::move(out));
  }
}

// Keeps acting with a fixed direction policy so the learning curve extends
// to total_iterations after LFD has terminated.
void run_flat_direction_phase(LearningTrace& trace, const TetrisEnv& env,
                              const LearnerConfig& config,
                              const DirectionState& directions, Rng& rng,
                              CallMeter& meter, std::uint64_t master,
                              std::uint64_t rep, int first_iteration) {
  LfdRolloutPolicy<TetrisEnv> policy{directions.direction,
                                     config.lfd.use_alternative_rollout_policy};
  Eigen::VectorXd d = directions_as_vector(directions.direction);
  auto state = env.initial_state(rng);
  for (int it = first_iteration; it <= config.total_iterations; ++it) {
    std::uint64_t before = meter.calls;
    auto choice = rollout_argmax(env, state, policy, config.rollout, rng, meter);
    auto outcome = env.step(state, choice.chosen, rng, meter);
    state = outcome.terminal ? env.initial_state(rng) : outcome.next;
    TraceRow row;
    row.iteration = it;
    row.phase = Phase::kLfd;
    row.beta = d;
    row.meter_delta = meter.calls - before;
    row.eval = maybe_eval(env, config, master, rep, it, row.beta);
    trace.rows.push_back(std::move(row));
  }
}

void run_m_phase(LearningTrace& trace, const TetrisEnv& env,
                 const LearnerConfig& config, MLearnerImpl& learner,
                 MLearningState& mstate, Rng& rng, CallMeter& meter,
                 std::uint64_t master, std::uint64_t rep, int first_iteration) {
  for (int it = first_iteration; it <= config.total_iterations; ++it) {
    std::uint64_t before = meter.calls;
    auto info = learner.iterate(mstate, rng, meter);
    TraceRow row;
    row.iteration = it;
    row.phase = Phase::kM;
    row.beta = mstate.beta;
    row.lambda = info.lambda;
    row.window = info.window;
    row.meter_delta = meter.calls - before;
    row.fit_converged = info.fit_converged;
    row.fit_capped = info.fit_capped;
    row.eval = maybe_eval(env, config, master, rep, it, row.beta);
    trace.rows.push_back(std::move(row));
  }
}

}  // namespace

MIterationInfo m_learning_iteration(const TetrisEnv& env,
                                    MLearningState& mstate,
                                    const LearnerConfig& config, Rng& rng,
                                    CallMeter& meter) {
  MLearnerImpl impl{env, config,
                    config.variant == Variant::kMStewKnownDirections
                        ? reference_directions()
                        : ones_directions()};
  return impl.iterate(mstate, rng, meter);
}

LearningTrace run_ipse(const TetrisEnv& env, const LearnerConfig& config,
                       std::uint64_t master_seed, std::uint64_t replication,
                       CallMeter& meter) {
  LearningTrace trace;
  trace.variant = Variant::kIpse;
  Rng rng = make_rng(learn_seed(master_seed, Variant::kIpse, replication));

  auto lfd = run_lfd(env, config.rollout, config.lfd, rng, meter);
  append_lfd_rows(trace, lfd, env, config, master_seed, replication);
  trace.lfd = lfd;
  if (!lfd.completed) {
    trace.aborted = true;
    return trace;
  }
  trace.transition_iteration = lfd.iterations_used + 1;

  // M phase: iteration counter restarts (lambda_1 = c, n(1) = 2), dataset
  // starts empty, beta starts at the learned directions.
  MLearnerImpl learner{env, config,
                       directions_as_vector(lfd.directions.direction)};
  MLearningState mstate;
  mstate.board = env.initial_state(rng);
  mstate.beta = learner.penalty_directions;
  run_m_phase(trace, env, config, learner, mstate, rng, meter, master_seed,
              replication, trace.transition_iteration);
  return trace;
}

LearningTrace run_variant(const TetrisEnv& env, const LearnerConfig& config,
                          std::uint64_t master_seed, std::uint64_t replication,
                          CallMeter& meter) {
  if (config.variant == Variant::kIpse)
    return run_ipse(env, config, master_seed, replication, meter);

  LearningTrace trace;
  trace.variant = config.variant;
  Rng rng = make_rng(learn_seed(master_seed, config.variant, replication));

  if (config.variant == Variant::kLfdOnly) {
    LfdConfig lfd_cfg = config.lfd;
    lfd_cfg.iteration_cap =
        std::min(lfd_cfg.iteration_cap, config.total_iterations);
    auto lfd = run_lfd(env, config.rollout, lfd_cfg, rng, meter);
    append_lfd_rows(trace, lfd, env, config, master_seed, replication);
    trace.lfd = lfd;
    if (!lfd.completed && lfd.iterations_used >= config.lfd.iteration_cap) {
      trace.aborted = true;
      return trace;
    }
    run_flat_direction_phase(trace, env, config, lfd.directions, rng, meter,
                             master_seed, replication,
                             lfd.iterations_used + 1);
    return trace;
  }

  MLearnerImpl learner{env, config,
                       config.variant == Variant::kMStewKnownDirections
                           ? reference_directions()
                           : ones_directions()};
  MLearningState mstate;
  mstate.board = env.initial_state(rng);
  mstate.beta = Eigen::VectorXd::Zero(env.feature_count());
  run_m_phase(trace, env, config, learner, mstate, rng, meter, master_seed,
              replication, 1);
  return trace;
}

}  // namespace ipse
