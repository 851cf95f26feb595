#pragma once

// Cell-by-cell reference implementation of the 8 placement features.
// Deliberately independent of the bitmask code paths in the library: works on
// a bool grid and follows the written conventions literally.

#include <array>
#include <vector>

#include "ipse/tetris/board.hpp"
#include "ipse/tetris/features.hpp"

namespace test_support {

using Grid = std::array<std::array<bool, ipse::tetris::kBoardWidth>,
                        ipse::tetris::kBoardHeight>;  // [row][col], row 0 bottom

inline Grid to_grid(const std::array<ipse::tetris::RowMask,
                                     ipse::tetris::kBoardHeight>& rows) {
  Grid g{};
  for (int r = 0; r < ipse::tetris::kBoardHeight; ++r)
    for (int c = 0; c < ipse::tetris::kBoardWidth; ++c)
      g[r][c] = (rows[r] >> c) & 1;
  return g;
}

inline std::array<double, 8> naive_features(
    const ipse::tetris::PlacementEvent& event, const Grid& post) {
  constexpr int W = ipse::tetris::kBoardWidth;
  constexpr int H = ipse::tetris::kBoardHeight;
  std::array<double, 8> f{};

  // landing height: midpoint of the placed piece's pre-clear rows
  if (!event.cells.empty()) {
    int lo = H, hi = -1;
    for (auto [row, col] : event.cells) {
      if (row < lo) lo = row;
      if (row > hi) hi = row;
    }
    f[0] = (lo + hi) / 2.0;
  }
  f[1] = double(event.lines_cleared) * event.piece_cells_in_cleared_lines;

  // row transitions, walls occupied
  int rt = 0;
  for (int r = 0; r < H; ++r) {
    std::vector<bool> line;
    line.push_back(true);
    for (int c = 0; c < W; ++c) line.push_back(post[r][c]);
    line.push_back(true);
    for (size_t i = 0; i + 1 < line.size(); ++i)
      if (line[i] != line[i + 1]) ++rt;
  }
  f[2] = rt;

  // column transitions, floor occupied, above the top row empty
  int ct = 0;
  for (int c = 0; c < W; ++c) {
    std::vector<bool> col;
    col.push_back(true);
    for (int r = 0; r < H; ++r) col.push_back(post[r][c]);
    col.push_back(false);
    for (size_t i = 0; i + 1 < col.size(); ++i)
      if (col[i] != col[i + 1]) ++ct;
  }
  f[3] = ct;

  auto occupied_above = [&](int row, int col) {
    int n = 0;
    for (int r = row + 1; r < H; ++r)
      if (post[r][col]) ++n;
    return n;
  };
  auto is_hole = [&](int row, int col) {
    return !post[row][col] && occupied_above(row, col) > 0;
  };

  int holes = 0, depth = 0;
  std::vector<bool> row_has_hole(H, false);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c)
      if (is_hole(r, c)) {
        ++holes;
        depth += occupied_above(r, c);
        row_has_hole[r] = true;
      }
  f[4] = holes;
  f[6] = depth;
  int rwh = 0;
  for (bool b : row_has_hole) rwh += b;
  f[7] = rwh;

  // cumulative wells: per column, maximal runs of well cells
  auto is_well_cell = [&](int row, int col) {
    if (post[row][col]) return false;
    bool left = col == 0 || post[row][col - 1];
    bool right = col == W - 1 || post[row][col + 1];
    if (!left || !right) return false;
    return occupied_above(row, col) == 0;
  };
  int wells = 0;
  for (int c = 0; c < W; ++c) {
    int r = 0;
    while (r < H) {
      if (!is_well_cell(r, c)) { ++r; continue; }
      int len = 0;
      while (r < H && is_well_cell(r, c)) { ++len; ++r; }
      wells += len * (len + 1) / 2;
    }
  }
  f[5] = wells;
  return f;
}

}  // namespace test_support
