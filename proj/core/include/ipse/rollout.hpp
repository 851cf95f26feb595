#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ipse/rng.hpp"

namespace ipse {

struct RolloutConfig {
  int rollouts_per_action = 10;  // M
  int rollout_length = 10;       // T
  double gamma = 1.0;
};

template <class Action>
struct ActionValueEstimate {
  Action action;
  double u_hat = 0;  // mean discounted T-step return over M rollouts
};

/// Picks a uniformly random index among the maximizers of `scores`.
inline int argmax_random_tie(std::span<const double> scores, Rng& rng) {
  if (scores.empty()) throw std::invalid_argument("argmax over empty set");
  double best = scores[0];
  for (double s : scores) best = s > best ? s : best;
  int n_ties = 0, pick = 0;
  for (int i = 0; i < int(scores.size()); ++i) {
    if (scores[i] == best) {
      ++n_ties;
      // reservoir sampling over the maximizers
      if (std::uniform_int_distribution<int>(1, n_ties)(rng) == 1) pick = i;
    }
  }
  return pick;
}

/// Monte-Carlo estimate of taking `action` in `state` and following
/// `policy` for the remaining steps. The action's own reward is collected at
/// t=0; a rollout reaching a terminal state keeps the rewards earned so far.
/// Every generative-model call ticks `meter` (at most T*M in total).
template <class Env, class Policy>
ActionValueEstimate<typename Env::Action> rollout(
    const Env& env, const typename Env::State& state,
    const typename Env::Action& action, Policy&& policy,
    const RolloutConfig& cfg, Rng& rng, CallMeter& meter) {
  double total = 0;
  for (int j = 0; j < cfg.rollouts_per_action; ++j) {
    auto res = env.step(state, action, rng, meter);
    double ret = res.reward;
    double discount = 1.0;
    for (int t = 1; t < cfg.rollout_length && !res.terminal; ++t) {
      auto a = policy(env, res.next, rng);
      res = env.step(res.next, a, rng, meter);
      discount *= cfg.gamma;
      ret += discount * res.reward;
    }
    total += ret;
  }
  return {action, total / cfg.rollouts_per_action};
}

template <class Action>
struct RolloutChoice {
  Action chosen;
  int chosen_index = 0;
  std::vector<ActionValueEstimate<Action>> estimates;
};

/// Evaluates every legal action by rollout and picks an argmax, breaking
/// ties uniformly at random from the replication's RNG stream.
template <class Env, class Policy>
RolloutChoice<typename Env::Action> rollout_argmax(
    const Env& env, const typename Env::State& state, Policy&& policy,
    const RolloutConfig& cfg, Rng& rng, CallMeter& meter) {
  auto actions = env.legal_actions(state);
  if (actions.empty())
    throw std::runtime_error("rollout_argmax: terminal state");
  RolloutChoice<typename Env::Action> out;
  out.estimates.reserve(actions.size());
  std::vector<double> scores;
  scores.reserve(actions.size());
  for (const auto& a : actions) {
    out.estimates.push_back(rollout(env, state, a, policy, cfg, rng, meter));
    scores.push_back(out.estimates.back().u_hat);
  }
  out.chosen_index = argmax_random_tie(scores, rng);
  out.chosen = actions[out.chosen_index];
  return out;
}

/// Removes actions whose direction-adjusted features are weakly worse than
/// some other action's on every coordinate and strictly worse on one.
/// FeatureAccess(index) -> feature container of action `index`.
/// Never empties the list. Off by default in the learners.
template <class FeatureAccess>
std::vector<int> dominance_filter(int n_actions, int n_features,
                                  std::span<const int> directions,
                                  FeatureAccess&& features_of) {
  std::vector<int> kept;
  for (int a = 0; a < n_actions; ++a) {
    bool dominated = false;
    for (int b = 0; b < n_actions && !dominated; ++b) {
      if (b == a) continue;
      bool all_geq = true, any_gt = false;
      for (int i = 0; i < n_features; ++i) {
        double fa = directions[i] * features_of(a)[i];
        double fb = directions[i] * features_of(b)[i];
        if (fb < fa) { all_geq = false; break; }
        if (fb > fa) any_gt = true;
      }
      dominated = all_geq && any_gt;
    }
    if (!dominated) kept.push_back(a);
  }
  if (kept.empty())
    for (int a = 0; a < n_actions; ++a) kept.push_back(a);
  return kept;
}

}  // namespace ipse
