#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ipse/rng.hpp"

namespace ipse::tetris {

inline constexpr int kBoardWidth = 10;
inline constexpr int kBoardHeight = 10;
inline constexpr int kNumPieces = 7;
inline constexpr int kMaxActions = 34;  // T piece on an empty 10-wide board

enum class Piece : std::uint8_t { I, O, T, S, Z, L, J };

char piece_char(Piece p);
std::optional<Piece> piece_from_char(char c);

using RowMask = std::uint16_t;
inline constexpr RowMask kFullRow = (RowMask(1) << kBoardWidth) - 1;

/// One rotation of a tetromino, normalized so min column = min row = 0.
/// bottom[j]/top[j] are the lowest/highest occupied row offsets in column j.
struct Rotation {
  int width = 0;
  int height = 0;
  std::vector<std::pair<int, int>> cells;  // (col, row), row 0 at the bottom
  std::array<int, 4> bottom{};
  std::array<int, 4> top{};
};

const std::vector<Rotation>& rotations(Piece p);

struct ActionPlacement {
  int rotation = 0;  // index into rotations(piece)
  int column = 0;    // leftmost occupied column
  bool operator==(const ActionPlacement&) const = default;
};

struct BoardState {
  std::array<RowMask, kBoardHeight> rows{};  // row 0 = bottom
  Piece piece = Piece::I;

  bool cell(int row, int col) const { return (rows[row] >> col) & 1; }
  int occupied_cells() const;
  /// One past the highest occupied row of each column (0 for an empty column).
  std::array<int, kBoardWidth> column_tops() const;
};

/// Placed-piece geometry before line clearing, plus what the clear removed.
struct PlacementEvent {
  std::vector<std::pair<int, int>> cells;  // (row, col), pre-clear coordinates
  int lines_cleared = 0;
  int piece_cells_in_cleared_lines = 0;
};

struct PlacementResult {
  std::array<RowMask, kBoardHeight> post_rows{};  // post-clear board
  PlacementEvent event;
};

/// Hard-drops `action` on `state`'s board. Returns nullopt when the piece
/// does not fit entirely within the board height (an illegal placement).
/// Deterministic; consumes no randomness and is not a generative-model call.
std::optional<PlacementResult> simulate_placement(const BoardState& state,
                                                  const ActionPlacement& action);
std::optional<PlacementResult> simulate_placement(
    const BoardState& state, const ActionPlacement& action,
    const std::array<int, kBoardWidth>& tops);

/// All placements of the current piece that fit horizontally and rest
/// entirely within the board. Empty list means the state is terminal.
std::vector<ActionPlacement> legal_actions(const BoardState& state);

Piece random_piece(Rng& rng);

/// Empty board, piece uniform over the 7 tetrominoes.
BoardState initial_state(Rng& rng);

struct StepResult {
  BoardState next;
  int reward = 0;  // lines cleared
  PlacementEvent event;
  bool terminal = false;  // next state admits no legal placement
};

/// The generative model G(s,a): applies the placement, clears lines, samples
/// the next piece. Increments `meter` by one. Throws std::invalid_argument if
/// the action is not legal in `state`.
StepResult step(const BoardState& state, const ActionPlacement& action,
                Rng& rng, CallMeter& meter);

/// Debug board format: kBoardHeight lines top-to-bottom of '.'/'#',
/// optional trailing "piece: <I|O|T|S|Z|L|J>".
BoardState parse_board(std::istream& in);
BoardState parse_board_file(const std::string& path);
std::string format_board(const BoardState& state);

}  // namespace ipse::tetris
