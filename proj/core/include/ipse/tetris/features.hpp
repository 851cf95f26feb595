#pragma once

#include <array>
#include <string_view>

#include "ipse/tetris/board.hpp"

namespace ipse::tetris {

inline constexpr int kNumFeatures = 8;

/// Canonical feature order. Indices are stable across CSV files and weight
/// vectors everywhere in the project.
enum FeatureIndex : int {
  kLandingHeight = 0,
  kErodedPieceCells = 1,
  kRowTransitions = 2,
  kColumnTransitions = 3,
  kHoles = 4,
  kBoardWells = 5,
  kHoleDepth = 6,
  kRowsWithHoles = 7,
};

using FeatureVector = std::array<double, kNumFeatures>;

const std::array<std::string_view, kNumFeatures>& feature_names();

/// Reference weight signs from the published hand-crafted Tetris controller:
/// +1 for eroded piece cells, -1 for everything else.
std::array<int, kNumFeatures> reference_direction_signs();

/// Features of one candidate placement. Landing height and eroded piece cells
/// come from the placement event (pre-clear geometry); the remaining six are
/// computed on the post-clear board. Walls count as occupied for row
/// transitions and wells; the floor counts as occupied and the top as open
/// for column transitions. Well cells accumulate 1+2+...+run_length per
/// maximal run; hole depth sums occupied cells strictly above each hole.
FeatureVector compute_features(const PlacementEvent& event,
                               const std::array<RowMask, kBoardHeight>& post_rows);

/// Pure-board features (zero-piece event); landing height and eroded are 0.
FeatureVector board_features(const std::array<RowMask, kBoardHeight>& rows);

}  // namespace ipse::tetris
