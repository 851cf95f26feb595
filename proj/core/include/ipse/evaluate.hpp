#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "ipse/policy.hpp"
#include "ipse/rng.hpp"

namespace ipse {

struct EvaluationResult {
  double mean_score = 0;
  double std_score = 0;
  int games = 0;
  int capped_games = 0;  // games stopped by the step cap
};

/// Plays independent greedy games with the given weights (feature directions
/// work too; a direction vector is just a weight vector) and reports the
/// per-game line-clear totals. Uses its own meter; evaluation is never
/// charged to a learning budget.
template <class Env>
EvaluationResult evaluate_policy(const Env& env, std::span<const double> beta,
                                 int games, Rng& rng,
                                 std::int64_t step_cap = 1'000'000) {
  EvaluationResult out;
  out.games = games;
  CallMeter scratch;
  double sum = 0, sumsq = 0;
  for (int g = 0; g < games; ++g) {
    auto state = env.initial_state(rng);
    double score = 0;
    std::int64_t steps = 0;
    bool capped = false;
    while (true) {
      if (steps >= step_cap) { capped = true; break; }
      auto actions = env.legal_actions(state);
      if (actions.empty()) break;
      auto a = greedy_policy_action(env, state, beta, rng);
      auto res = env.step(state, a, rng, scratch);
      score += res.reward;
      ++steps;
      if (res.terminal) break;
      state = res.next;
    }
    if (capped) ++out.capped_games;
    sum += score;
    sumsq += score * score;
  }
  out.mean_score = sum / games;
  double var = sumsq / games - out.mean_score * out.mean_score;
  out.std_score = var > 0 ? std::sqrt(var) : 0;
  return out;
}

}  // namespace ipse
