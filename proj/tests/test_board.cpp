#include <doctest.h>

#include <bit>
#include <sstream>

#include "ipse/tetris/board.hpp"
#include "support/boards.hpp"

using namespace ipse;
using namespace ipse::tetris;
using test_support::make_board;
using test_support::random_board;

TEST_CASE("initial state is an empty board with a uniform piece") {
  Rng rng = make_rng(7);
  auto s = initial_state(rng);
  for (auto r : s.rows) CHECK(r == 0);

  Rng a = make_rng(123), b = make_rng(123);
  CHECK(initial_state(a).piece == initial_state(b).piece);

  // 7000 draws: each piece within 5 sigma of 1000
  Rng rng2 = make_rng(99);
  std::array<int, kNumPieces> counts{};
  for (int i = 0; i < 7000; ++i) ++counts[int(random_piece(rng2))];
  double sigma = std::sqrt(7000.0 * (1.0 / 7) * (6.0 / 7));
  for (int c : counts) CHECK(std::abs(c - 1000.0) < 5 * sigma);
}

TEST_CASE("legal action counts on the empty board") {
  BoardState s;
  s.piece = Piece::O;
  CHECK(legal_actions(s).size() == 9);
  s.piece = Piece::I;
  CHECK(legal_actions(s).size() == 17);
  s.piece = Piece::T;
  CHECK(legal_actions(s).size() == 34);
  s.piece = Piece::S;
  CHECK(legal_actions(s).size() == 17);
  s.piece = Piece::L;
  CHECK(legal_actions(s).size() == 34);
  for (int p = 0; p < kNumPieces; ++p) {
    s.piece = Piece(p);
    CHECK(legal_actions(s).size() <= kMaxActions);
  }
}

TEST_CASE("O drop on the empty board") {
  BoardState s;
  s.piece = Piece::O;
  Rng rng = make_rng(0);
  CallMeter meter;
  auto res = step(s, {0, 0}, rng, meter);
  CHECK(res.reward == 0);
  CHECK(meter.calls == 1);
  REQUIRE(res.event.cells.size() == 4);
  for (auto [row, col] : res.event.cells) {
    CHECK(row <= 1);
    CHECK(col <= 1);
  }
  CHECK(res.next.cell(0, 0));
  CHECK(res.next.cell(1, 1));
  CHECK(res.next.occupied_cells() == 4);
}

TEST_CASE("completing a row clears it and shifts rows down") {
  auto s = make_board({"..........",
                       "..........",
                       "..........",
                       "..........",
                       "..........",
                       "..........",
                       "..........",
                       "..........",
                       "..........",
                       ".#########"},
                      Piece::I);
  Rng rng = make_rng(1);
  CallMeter meter;
  // vertical I into the empty left column
  auto res = step(s, {1, 0}, rng, meter);
  CHECK(res.reward == 1);
  CHECK(res.event.lines_cleared == 1);
  CHECK(res.event.piece_cells_in_cleared_lines == 1);
  // remaining I cells shifted to rows 0..2 of column 0
  CHECK(res.next.cell(0, 0));
  CHECK(res.next.cell(2, 0));
  CHECK(!res.next.cell(3, 0));
  CHECK(res.next.occupied_cells() == 3);
  for (auto r : res.next.rows) CHECK(r != kFullRow);
}

TEST_CASE("full columns leave no legal action") {
  BoardState s;
  for (int r = 0; r < kBoardHeight; ++r) s.rows[r] = kFullRow & ~RowMask(1);
  s.rows[0] |= 1;  // column 0 height 10 via a partial fill; others 10 too
  for (int r = 1; r < kBoardHeight; ++r) s.rows[r] |= 1;
  s.rows[3] &= ~(RowMask(1) << 4);  // keep a hole so no row is full
  for (int p = 0; p < kNumPieces; ++p) {
    s.piece = Piece(p);
    CHECK(legal_actions(s).empty());
  }
}

TEST_CASE("illegal actions are rejected") {
  BoardState s;
  s.piece = Piece::O;
  Rng rng = make_rng(0);
  CallMeter meter;
  CHECK_THROWS_AS(step(s, {0, 9}, rng, meter), std::invalid_argument);
  CHECK_THROWS_AS(step(s, {1, 0}, rng, meter), std::invalid_argument);
  CHECK(meter.calls == 0);
}

TEST_CASE("cell conservation and no-full-row invariant over random play") {
  Rng rng = make_rng(2024);
  CallMeter meter;
  auto s = initial_state(rng);
  for (int i = 0; i < 2000; ++i) {
    auto actions = legal_actions(s);
    if (actions.empty()) {
      s = initial_state(rng);
      continue;
    }
    auto a = actions[std::uniform_int_distribution<size_t>(0, actions.size() - 1)(rng)];
    int before = s.occupied_cells();
    auto res = step(s, a, rng, meter);
    CHECK(res.next.occupied_cells() ==
          before + 4 - kBoardWidth * res.event.lines_cleared);
    CHECK(res.reward == res.event.lines_cleared);
    for (auto r : res.next.rows) CHECK(r != kFullRow);
    s = res.terminal ? initial_state(rng) : res.next;
  }
}

TEST_CASE("step is deterministic given the rng stream position") {
  Rng rng1 = make_rng(5), rng2 = make_rng(5);
  CallMeter m1, m2;
  BoardState s;
  s.piece = Piece::T;
  auto r1 = step(s, {2, 3}, rng1, m1);
  auto r2 = step(s, {2, 3}, rng2, m2);
  CHECK(r1.next.rows == r2.next.rows);
  CHECK(r1.next.piece == r2.next.piece);
  CHECK(r1.reward == r2.reward);
}

TEST_CASE("debug board format round trip") {
  Rng rng = make_rng(77);
  for (int i = 0; i < 20; ++i) {
    auto s = random_board(rng);
    std::istringstream in(format_board(s));
    auto back = parse_board(in);
    CHECK(back.rows == s.rows);
    CHECK(back.piece == s.piece);
  }
}

TEST_CASE("board parser rejects malformed input") {
  std::istringstream bad("not a board\n");
  CHECK_THROWS(parse_board(bad));
  std::istringstream wrong_char(
      "..........\n..........\n..........\n..........\n..........\n"
      "..........\n..........\n..........\n..........\n....x.....\n");
  CHECK_THROWS(parse_board(wrong_char));
}
