#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ipse/rng.hpp"
#include "ipse/rollout.hpp"

namespace ipse {

/// Exact two-sided binomial test of H0: successes are Bernoulli(1/2).
/// p = min(1, 2 * P[X >= max(n_plus, n_minus)]), X ~ Binomial(n,1/2);
/// p = 1 when no observations.
double binomial_p_value(int n_plus, int n_minus);

/// Per-feature evidence counters and decided directions. A direction, once
/// decided, is frozen; its counters stop accumulating.
struct DirectionState {
  std::vector<int> n_plus;
  std::vector<int> n_minus;
  std::vector<int> direction;           // in {-1, 0, +1}
  std::vector<int> decided_at;          // iteration of decision, -1 if undecided

  explicit DirectionState(int num_features = 0)
      : n_plus(num_features, 0),
        n_minus(num_features, 0),
        direction(num_features, 0),
        decided_at(num_features, -1) {}

  int size() const { return int(direction.size()); }
  bool all_decided() const {
    for (int d : direction)
      if (d == 0) return false;
    return !direction.empty();
  }
};

struct LfdConfig {
  double alpha = 0.05;
  /// Prefer the highest immediate reward whenever some action has a positive
  /// one; fall back to the directed-feature argmax otherwise.
  bool use_alternative_rollout_policy = true;
  int iteration_cap = 5000;
};

/// Paired-comparison training instance for feature i:
/// sign of the sum over alternatives of sign(phi_i(chosen) - phi_i(other)).
template <class Vec, class VecList>
int delta_instance(const Vec& chosen_features, const VecList& other_features,
                   int i) {
  int sum = 0;
  for (const auto& other : other_features) {
    double diff = chosen_features[i] - other[i];
    sum += diff > 0 ? 1 : diff < 0 ? -1 : 0;
  }
  return sum > 0 ? 1 : sum < 0 ? -1 : 0;
}

/// One counting-and-testing pass over the undecided features.
/// `iteration` is recorded as the decision time of any feature that crosses
/// the significance threshold here.
void update_directions(DirectionState& state, std::span<const int> deltas,
                       double alpha, int iteration);

/// Rollout policy over decided directions: argmax of d.phi with uniform
/// tie-breaks. With `prefer_immediate_reward`, any action promising a
/// positive immediate reward short-circuits the directed score (ties among
/// top rewards fall back to d.phi, then random).
template <class Env>
typename Env::Action directed_policy_action(const Env& env,
                                            const typename Env::State& state,
                                            std::span<const int> directions,
                                            bool prefer_immediate_reward,
                                            Rng& rng) {
  auto cands = env.candidates(state);
  if (cands.empty())
    throw std::runtime_error("directed_policy_action: terminal state");
  std::vector<double> scores(cands.size(), 0.0);
  for (size_t a = 0; a < cands.size(); ++a)
    for (int i = 0; i < env.feature_count(); ++i)
      scores[a] += directions[i] * cands[a].features[i];
  if (prefer_immediate_reward) {
    double best_r = 0;
    for (const auto& c : cands) best_r = std::max(best_r, c.immediate_reward);
    if (best_r > 0) {
      // restrict the directed argmax to the top-reward actions
      for (size_t a = 0; a < cands.size(); ++a)
        if (cands[a].immediate_reward < best_r)
          scores[a] = -std::numeric_limits<double>::infinity();
    }
  }
  return cands[argmax_random_tie(scores, rng)].action;
}

template <class Env>
struct LfdRolloutPolicy {
  std::span<const int> directions;
  bool prefer_immediate_reward = false;

  typename Env::Action operator()(const Env& env,
                                  const typename Env::State& state,
                                  Rng& rng) const {
    return directed_policy_action(env, state, directions,
                                  prefer_immediate_reward, rng);
  }
};

struct LfdTraceRow {
  int iteration = 0;
  std::vector<int> n_plus, n_minus, direction;
  std::uint64_t meter_delta = 0;
  bool episode_reset = false;
};

struct LfdResult {
  DirectionState directions;
  int iterations_used = 0;
  bool completed = false;  // false when the iteration cap was hit
  std::vector<LfdTraceRow> trace;
};

/// Direction learning: navigate with the directed rollout policy, accumulate
/// one paired-comparison instance per feature on every non-terminal
/// transition, and test after each update, until all directions are decided
/// or the iteration cap is hit. `observer(iteration, state_after)` runs once
/// per iteration when provided.
template <class Env, class Observer>
LfdResult run_lfd(const Env& env, const RolloutConfig& rollout_cfg,
                  const LfdConfig& lfd_cfg, Rng& rng, CallMeter& meter,
                  Observer&& observer) {
  const int p = env.feature_count();
  LfdResult res{DirectionState(p), 0, false, {}};
  LfdRolloutPolicy<Env> policy{res.directions.direction,
                               lfd_cfg.use_alternative_rollout_policy};
  auto state = env.initial_state(rng);
  while (!res.directions.all_decided()) {
    if (res.iterations_used >= lfd_cfg.iteration_cap) return res;
    ++res.iterations_used;
    const std::uint64_t meter_before = meter.calls;

    auto cands = env.candidates(state);
    auto choice = rollout_argmax(env, state, policy, rollout_cfg, rng, meter);
    auto outcome = env.step(state, choice.chosen, rng, meter);

    LfdTraceRow row;
    row.iteration = res.iterations_used;
    if (!outcome.terminal) {
      std::vector<int> deltas(p, 0);
      for (int i = 0; i < p; ++i) {
        int sum = 0;
        for (size_t a = 0; a < cands.size(); ++a) {
          if (int(a) == choice.chosen_index) continue;
          double diff = cands[choice.chosen_index].features[i] - cands[a].features[i];
          sum += diff > 0 ? 1 : diff < 0 ? -1 : 0;
        }
        deltas[i] = sum > 0 ? 1 : sum < 0 ? -1 : 0;
      }
      update_directions(res.directions, deltas, lfd_cfg.alpha,
                        res.iterations_used);
      state = outcome.next;
    } else {
      state = env.initial_state(rng);
      row.episode_reset = true;
    }
    row.n_plus = res.directions.n_plus;
    row.n_minus = res.directions.n_minus;
    row.direction = res.directions.direction;
    row.meter_delta = meter.calls - meter_before;
    res.trace.push_back(std::move(row));
    observer(res.iterations_used, state);
  }
  res.completed = true;
  return res;
}

template <class Env>
LfdResult run_lfd(const Env& env, const RolloutConfig& rollout_cfg,
                  const LfdConfig& lfd_cfg, Rng& rng, CallMeter& meter) {
  return run_lfd(env, rollout_cfg, lfd_cfg, rng, meter,
                 [](int, const typename Env::State&) {});
}

}  // namespace ipse
