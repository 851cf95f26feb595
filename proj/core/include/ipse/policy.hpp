#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ipse/rng.hpp"
#include "ipse/rollout.hpp"

namespace ipse {

/// Greedy linear policy: argmax over legal actions of beta.phi(s,a),
/// uniform random tie-break. beta = 0 degenerates to a uniform policy.
template <class Env>
typename Env::Action greedy_policy_action(const Env& env,
                                          const typename Env::State& state,
                                          std::span<const double> beta,
                                          Rng& rng) {
  auto cands = env.candidates(state);
  if (cands.empty())
    throw std::runtime_error("greedy_policy_action: terminal state");
  std::vector<double> scores(cands.size(), 0.0);
  for (size_t a = 0; a < cands.size(); ++a)
    for (int i = 0; i < env.feature_count(); ++i)
      scores[a] += beta[i] * cands[a].features[i];
  return cands[argmax_random_tie(scores, rng)].action;
}

template <class Env>
struct GreedyPolicy {
  std::span<const double> beta;
  typename Env::Action operator()(const Env& env,
                                  const typename Env::State& state,
                                  Rng& rng) const {
    return greedy_policy_action(env, state, beta, rng);
  }
};

}  // namespace ipse
