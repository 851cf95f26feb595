#include <benchmark/benchmark.h>

#include "ipse/lfd.hpp"
#include "ipse/policy.hpp"
#include "ipse/tetris/env.hpp"

using namespace ipse;
using namespace ipse::tetris;

namespace {

// A mid-game board: partially filled stack with a couple of holes.
BoardState sample_board() {
  BoardState s;
  s.piece = Piece::T;
  const RowMask rows[4] = {0b1111011111, 0b0111011110, 0b0011000110, 0b0001000010};
  for (int r = 0; r < 4; ++r) s.rows[r] = rows[r];
  return s;
}

void BM_LegalActions(benchmark::State& state) {
  auto board = sample_board();
  for (auto _ : state) benchmark::DoNotOptimize(legal_actions(board));
}
BENCHMARK(BM_LegalActions);

void BM_SimulatePlacement(benchmark::State& state) {
  auto board = sample_board();
  ActionPlacement a{0, 3};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_placement(board, a));
}
BENCHMARK(BM_SimulatePlacement);

void BM_BoardFeatures(benchmark::State& state) {
  auto board = sample_board();
  for (auto _ : state) benchmark::DoNotOptimize(board_features(board.rows));
}
BENCHMARK(BM_BoardFeatures);

void BM_Candidates(benchmark::State& state) {
  TetrisEnv env;
  auto board = sample_board();
  for (auto _ : state) benchmark::DoNotOptimize(env.candidates(board));
}
BENCHMARK(BM_Candidates);

void BM_RolloutArgmax(benchmark::State& state) {
  TetrisEnv env;
  auto board = sample_board();
  Rng rng = make_rng(1);
  CallMeter meter;
  std::array<double, kNumFeatures> beta{-1, 1, -1, -1, -4, -1, -1, -1};
  GreedyPolicy<TetrisEnv> policy{beta};
  RolloutConfig cfg{10, 10, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        rollout_argmax(env, board, policy, cfg, rng, meter));
}
BENCHMARK(BM_RolloutArgmax)->Unit(benchmark::kMillisecond);

void BM_GreedyGame(benchmark::State& state) {
  TetrisEnv env;
  Rng rng = make_rng(2);
  CallMeter meter;
  std::array<double, kNumFeatures> beta{-1, 1, -1, -1, -4, -1, -1, -1};
  for (auto _ : state) {
    auto s = env.initial_state(rng);
    long total = 0;
    for (int t = 0; t < 200; ++t) {
      auto actions = env.legal_actions(s);
      if (actions.empty()) break;
      auto a = greedy_policy_action(env, s, std::span<const double>(beta), rng);
      auto res = env.step(s, a, rng, meter);
      total += res.reward;
      if (res.terminal) break;
      s = res.next;
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_GreedyGame)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
