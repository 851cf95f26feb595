#include "ipse/tetris/board.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace ipse::tetris {

char piece_char(Piece p) {
  static constexpr char kChars[] = {'I', 'O', 'T', 'S', 'Z', 'L', 'J'};
  return kChars[static_cast<int>(p)];
}

std::optional<Piece> piece_from_char(char c) {
  switch (c) {
    case 'I': return Piece::I;
    case 'O': return Piece::O;
    case 'T': return Piece::T;
    case 'S': return Piece::S;
    case 'Z': return Piece::Z;
    case 'L': return Piece::L;
    case 'J': return Piece::J;
    default: return std::nullopt;
  }
}

namespace {

Rotation make_rotation(std::vector<std::pair<int, int>> cells) {
  Rotation r;
  r.cells = std::move(cells);
  for (auto& [c, row] : r.cells) {
    r.width = std::max(r.width, c + 1);
    r.height = std::max(r.height, row + 1);
  }
  r.bottom.fill(kBoardHeight);
  r.top.fill(-1);
  for (auto& [c, row] : r.cells) {
    r.bottom[c] = std::min(r.bottom[c], row);
    r.top[c] = std::max(r.top[c], row);
  }
  return r;
}

std::vector<Rotation> build_rotations(Piece p) {
  using V = std::vector<std::pair<int, int>>;
  switch (p) {
    case Piece::I:
      return {make_rotation(V{{0, 0}, {1, 0}, {2, 0}, {3, 0}}),
              make_rotation(V{{0, 0}, {0, 1}, {0, 2}, {0, 3}})};
    case Piece::O:
      return {make_rotation(V{{0, 0}, {1, 0}, {0, 1}, {1, 1}})};
    case Piece::T:
      return {make_rotation(V{{0, 0}, {1, 0}, {2, 0}, {1, 1}}),
              make_rotation(V{{0, 0}, {0, 1}, {0, 2}, {1, 1}}),
              make_rotation(V{{1, 0}, {0, 1}, {1, 1}, {2, 1}}),
              make_rotation(V{{1, 0}, {0, 1}, {1, 1}, {1, 2}})};
    case Piece::S:
      return {make_rotation(V{{0, 0}, {1, 0}, {1, 1}, {2, 1}}),
              make_rotation(V{{1, 0}, {0, 1}, {1, 1}, {0, 2}})};
    case Piece::Z:
      return {make_rotation(V{{1, 0}, {2, 0}, {0, 1}, {1, 1}}),
              make_rotation(V{{0, 0}, {0, 1}, {1, 1}, {1, 2}})};
    case Piece::L:
      return {make_rotation(V{{0, 0}, {1, 0}, {2, 0}, {0, 1}}),
              make_rotation(V{{0, 0}, {0, 1}, {0, 2}, {1, 2}}),
              make_rotation(V{{2, 0}, {0, 1}, {1, 1}, {2, 1}}),
              make_rotation(V{{0, 0}, {1, 0}, {1, 1}, {1, 2}})};
    case Piece::J:
      return {make_rotation(V{{0, 0}, {1, 0}, {2, 0}, {2, 1}}),
              make_rotation(V{{0, 0}, {1, 0}, {0, 1}, {0, 2}}),
              make_rotation(V{{0, 0}, {0, 1}, {1, 1}, {2, 1}}),
              make_rotation(V{{1, 0}, {1, 1}, {0, 2}, {1, 2}})};
  }
  throw std::logic_error("unknown piece");
}

}  // namespace

const std::vector<Rotation>& rotations(Piece p) {
  static const std::array<std::vector<Rotation>, kNumPieces> kTable = [] {
    std::array<std::vector<Rotation>, kNumPieces> t;
    for (int i = 0; i < kNumPieces; ++i) t[i] = build_rotations(Piece(i));
    return t;
  }();
  return kTable[static_cast<int>(p)];
}

int BoardState::occupied_cells() const {
  int n = 0;
  for (RowMask r : rows) n += std::popcount(r);
  return n;
}

std::array<int, kBoardWidth> BoardState::column_tops() const {
  std::array<int, kBoardWidth> tops{};
  for (int r = 0; r < kBoardHeight; ++r) {
    RowMask m = rows[r];
    while (m) {
      int c = std::countr_zero(m);
      tops[c] = r + 1;
      m &= RowMask(m - 1);
    }
  }
  return tops;
}

std::optional<PlacementResult> simulate_placement(
    const BoardState& state, const ActionPlacement& action,
    const std::array<int, kBoardWidth>& tops) {
  const auto& rots = rotations(state.piece);
  if (action.rotation < 0 || action.rotation >= int(rots.size()))
    return std::nullopt;
  const Rotation& rot = rots[action.rotation];
  if (action.column < 0 || action.column + rot.width > kBoardWidth)
    return std::nullopt;

  int base = 0;
  for (int j = 0; j < rot.width; ++j)
    base = std::max(base, tops[action.column + j] - rot.bottom[j]);
  if (base + rot.height > kBoardHeight) return std::nullopt;

  PlacementResult res;
  res.post_rows = state.rows;
  res.event.cells.reserve(4);
  for (auto [c, dr] : rot.cells) {
    int row = base + dr;
    res.post_rows[row] |= RowMask(1) << (action.column + c);
    res.event.cells.emplace_back(row, action.column + c);
  }

  // Clear full rows within the piece's vertical span, shifting rows down.
  RowMask cleared_rows_mask = 0;  // bit r set = pre-clear row r was full
  for (int r = base; r < base + rot.height; ++r)
    if (res.post_rows[r] == kFullRow) cleared_rows_mask |= RowMask(1) << r;
  if (cleared_rows_mask) {
    int dst = 0;
    std::array<RowMask, kBoardHeight> packed{};
    for (int r = 0; r < kBoardHeight; ++r)
      if (!((cleared_rows_mask >> r) & 1)) packed[dst++] = res.post_rows[r];
    res.post_rows = packed;
    res.event.lines_cleared = std::popcount(cleared_rows_mask);
    for (auto [row, col] : res.event.cells)
      if ((cleared_rows_mask >> row) & 1) ++res.event.piece_cells_in_cleared_lines;
  }
  return res;
}

std::optional<PlacementResult> simulate_placement(const BoardState& state,
                                                  const ActionPlacement& action) {
  return simulate_placement(state, action, state.column_tops());
}

std::vector<ActionPlacement> legal_actions(const BoardState& state) {
  std::vector<ActionPlacement> actions;
  actions.reserve(kMaxActions);
  const auto tops = state.column_tops();
  const auto& rots = rotations(state.piece);
  for (int ri = 0; ri < int(rots.size()); ++ri) {
    const Rotation& rot = rots[ri];
    for (int col = 0; col + rot.width <= kBoardWidth; ++col) {
      int base = 0;
      for (int j = 0; j < rot.width; ++j)
        base = std::max(base, tops[col + j] - rot.bottom[j]);
      if (base + rot.height <= kBoardHeight)
        actions.push_back({ri, col});
    }
  }
  return actions;
}

Piece random_piece(Rng& rng) {
  return Piece(std::uniform_int_distribution<int>(0, kNumPieces - 1)(rng));
}

BoardState initial_state(Rng& rng) {
  BoardState s;
  s.piece = random_piece(rng);
  return s;
}

StepResult step(const BoardState& state, const ActionPlacement& action,
                Rng& rng, CallMeter& meter) {
  auto placed = simulate_placement(state, action);
  if (!placed)
    throw std::invalid_argument("tetris::step: illegal action placement");
  meter.tick();
  StepResult out;
  out.next.rows = placed->post_rows;
  out.next.piece = random_piece(rng);
  out.reward = placed->event.lines_cleared;
  out.event = std::move(placed->event);
  out.terminal = legal_actions(out.next).empty();
  return out;
}

BoardState parse_board(std::istream& in) {
  BoardState s;
  std::string line;
  int read_rows = 0;
  while (read_rows < kBoardHeight && std::getline(in, line)) {
    if (line.empty()) continue;
    if (int(line.size()) < kBoardWidth)
      throw std::runtime_error("board row too short: " + line);
    int row = kBoardHeight - 1 - read_rows;  // file is top-to-bottom
    for (int c = 0; c < kBoardWidth; ++c) {
      if (line[c] == '#')
        s.rows[row] |= RowMask(1) << c;
      else if (line[c] != '.')
        throw std::runtime_error("bad board character: " + line);
    }
    ++read_rows;
  }
  if (read_rows != kBoardHeight)
    throw std::runtime_error("board file needs 10 rows");
  while (std::getline(in, line)) {
    auto pos = line.find("piece:");
    if (pos == std::string::npos) continue;
    auto rest = line.substr(pos + 6);
    auto nonspace = rest.find_first_not_of(" \t");
    if (nonspace == std::string::npos)
      throw std::runtime_error("empty piece line");
    auto p = piece_from_char(rest[nonspace]);
    if (!p) throw std::runtime_error("unknown piece: " + rest);
    s.piece = *p;
  }
  return s;
}

BoardState parse_board_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open board file: " + path);
  return parse_board(in);
}

std::string format_board(const BoardState& state) {
  std::ostringstream out;
  for (int r = kBoardHeight - 1; r >= 0; --r) {
    for (int c = 0; c < kBoardWidth; ++c) out << (state.cell(r, c) ? '#' : '.');
    out << '\n';
  }
  out << "piece: " << piece_char(state.piece) << '\n';
  return out.str();
}

}  // namespace ipse::tetris
