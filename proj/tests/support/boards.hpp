#pragma once

#include <string>
#include <vector>

#include "ipse/rng.hpp"
#include "ipse/tetris/board.hpp"

namespace test_support {

/// Builds a board from kBoardHeight strings, top row first, '.'/'#'.
inline ipse::tetris::BoardState make_board(
    const std::vector<std::string>& rows_top_down,
    ipse::tetris::Piece piece = ipse::tetris::Piece::I) {
  using namespace ipse::tetris;
  BoardState s;
  s.piece = piece;
  for (int i = 0; i < kBoardHeight; ++i) {
    int row = kBoardHeight - 1 - i;
    for (int c = 0; c < kBoardWidth; ++c)
      if (rows_top_down[i][c] == '#') s.rows[row] |= RowMask(1) << c;
  }
  return s;
}

/// Random board with no full rows, denser toward the bottom.
inline ipse::tetris::BoardState random_board(ipse::Rng& rng) {
  using namespace ipse::tetris;
  BoardState s;
  s.piece = random_piece(rng);
  std::uniform_real_distribution<double> u(0, 1);
  int filled_height = std::uniform_int_distribution<int>(0, kBoardHeight - 2)(rng);
  for (int r = 0; r < filled_height; ++r) {
    double density = 0.8 - 0.5 * r / kBoardHeight;
    for (int c = 0; c < kBoardWidth; ++c)
      if (u(rng) < density) s.rows[r] |= RowMask(1) << c;
    if (s.rows[r] == kFullRow) {
      int hole = std::uniform_int_distribution<int>(0, kBoardWidth - 1)(rng);
      s.rows[r] &= ~(RowMask(1) << hole);
    }
  }
  return s;
}

}  // namespace test_support
