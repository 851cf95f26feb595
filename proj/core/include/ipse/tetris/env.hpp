#pragma once

#include <vector>

#include "ipse/tetris/board.hpp"
#include "ipse/tetris/features.hpp"

namespace ipse::tetris {

/// One candidate placement for the current state: action, its deterministic
/// outcome and the feature vector phi(s,a). Enumerating candidates consumes
/// no randomness and is not charged to the generative-model meter.
struct Candidate {
  ActionPlacement action;
  FeatureVector features;
  double immediate_reward = 0;  // lines the placement clears
};

/// Environment facade used by the rollout/learning templates.
///
/// The generic environment interface expected by those templates:
///   State, Action, StepResult{next,reward,terminal}
///   initial_state(rng) / legal_actions(state) / step(state,action,rng,meter)
///   feature_count() / candidates(state)
class TetrisEnv {
 public:
  using State = BoardState;
  using Action = ActionPlacement;
  using StepResult = tetris::StepResult;

  State initial_state(Rng& rng) const { return tetris::initial_state(rng); }

  std::vector<Action> legal_actions(const State& s) const {
    return tetris::legal_actions(s);
  }

  StepResult step(const State& s, const Action& a, Rng& rng,
                  CallMeter& meter) const {
    return tetris::step(s, a, rng, meter);
  }

  int feature_count() const { return kNumFeatures; }

  std::vector<Candidate> candidates(const State& s) const {
    std::vector<Candidate> out;
    out.reserve(kMaxActions);
    const auto tops = s.column_tops();
    for (const auto& a : tetris::legal_actions(s)) {
      auto placed = simulate_placement(s, a, tops);
      Candidate c;
      c.action = a;
      c.features = compute_features(placed->event, placed->post_rows);
      c.immediate_reward = placed->event.lines_cleared;
      out.push_back(std::move(c));
    }
    return out;
  }
};

}  // namespace ipse::tetris
