#include "ipse/tetris/features.hpp"

#include <algorithm>
#include <bit>

namespace ipse::tetris {

const std::array<std::string_view, kNumFeatures>& feature_names() {
  static const std::array<std::string_view, kNumFeatures> kNames = {
      "landing_height", "eroded_piece_cells", "row_transitions",
      "column_transitions", "holes", "board_wells", "hole_depth",
      "rows_with_holes"};
  return kNames;
}

std::array<int, kNumFeatures> reference_direction_signs() {
  std::array<int, kNumFeatures> d;
  d.fill(-1);
  d[kErodedPieceCells] = +1;
  return d;
}

FeatureVector board_features(const std::array<RowMask, kBoardHeight>& rows) {
  FeatureVector f{};

  // Row transitions: walls occupied. 12-bit pattern per row, 11 adjacent pairs.
  int row_trans = 0;
  for (int r = 0; r < kBoardHeight; ++r) {
    unsigned x = (unsigned(rows[r]) << 1) | 1u | (1u << (kBoardWidth + 1));
    row_trans += std::popcount((x ^ (x >> 1)) & ((1u << (kBoardWidth + 1)) - 1));
  }
  f[kRowTransitions] = row_trans;

  // Column transitions: floor occupied, cell above the top row empty.
  int col_trans = kBoardWidth - std::popcount(rows[0]);
  for (int r = 0; r + 1 < kBoardHeight; ++r)
    col_trans += std::popcount(RowMask(rows[r] ^ rows[r + 1]));
  col_trans += std::popcount(rows[kBoardHeight - 1]);
  f[kColumnTransitions] = col_trans;

  // Holes, hole depth, rows with holes: one top-down pass per column.
  int holes = 0, hole_depth = 0;
  RowMask hole_rows = 0;
  for (int c = 0; c < kBoardWidth; ++c) {
    int occ_above = 0;
    for (int r = kBoardHeight - 1; r >= 0; --r) {
      bool occ = (rows[r] >> c) & 1;
      if (occ) {
        ++occ_above;
      } else if (occ_above > 0) {
        ++holes;
        hole_depth += occ_above;
        hole_rows |= RowMask(1) << r;
      }
    }
  }
  f[kHoles] = holes;
  f[kHoleDepth] = hole_depth;
  f[kRowsWithHoles] = std::popcount(hole_rows);

  // Cumulative wells: cells above a column's stack whose side neighbors are
  // occupied (walls occupied); each maximal run adds 1+2+...+len.
  int wells = 0;
  for (int c = 0; c < kBoardWidth; ++c) {
    int top = 0;
    for (int r = kBoardHeight - 1; r >= 0; --r)
      if ((rows[r] >> c) & 1) { top = r + 1; break; }
    int run = 0;
    for (int r = top; r < kBoardHeight; ++r) {
      bool left = c == 0 || ((rows[r] >> (c - 1)) & 1);
      bool right = c == kBoardWidth - 1 || ((rows[r] >> (c + 1)) & 1);
      if (left && right) {
        ++run;
        wells += run;  // running triangular sum for the current run
      } else {
        run = 0;
      }
    }
  }
  f[kBoardWells] = wells;
  return f;
}

FeatureVector compute_features(const PlacementEvent& event,
                               const std::array<RowMask, kBoardHeight>& post_rows) {
  FeatureVector f = board_features(post_rows);
  if (!event.cells.empty()) {
    int lo = kBoardHeight, hi = -1;
    for (auto [row, col] : event.cells) {
      lo = std::min(lo, row);
      hi = std::max(hi, row);
    }
    f[kLandingHeight] = 0.5 * (lo + hi);
  }
  f[kErodedPieceCells] =
      double(event.lines_cleared) * double(event.piece_cells_in_cleared_lines);
  return f;
}

}  // namespace ipse::tetris
