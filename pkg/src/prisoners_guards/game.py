"""Two-player colored game on top of the uncolored rules.

RED moves first.  A Rule I move places a prisoner of the mover's color; a
Rule II move may remove a prisoner of either color and adds two prisoners of
the mover's color.  Colors never affect legality - the validity rule counts
prisoners of both colors alike - so the legal moves of a state are exactly
the legal moves of the color-erased board.  The game is over when the
underlying board is maximal; the player with more prisoners wins, equal
counts tie.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Union

from .board import Board, ParseError, Square, _bitpos, check_size, is_valid
from .moves import (
    IllegalMoveError,
    Move,
    PlaceMove,
    SwapMove,
    is_maximal,
    legal_moves,
    move_from_json,
    move_to_json,
)


class Color(Enum):
    RED = "R"
    BLUE = "B"

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class GameStatus(Enum):
    ONGOING = "ongoing"
    FINISHED = "finished"


class Outcome(Enum):
    RED_WINS = "red_wins"
    BLUE_WINS = "blue_wins"
    TIE = "tie"


class GameOverError(Exception):
    """Raised when a finished game is asked for a move."""


@dataclass(frozen=True)
class ColoredBoard:
    """Occupancy split into one bitset per color; disjoint by construction."""

    n: int
    red: int = 0
    blue: int = 0

    def __post_init__(self):
        check_size(self.n)
        if self.red & self.blue:
            raise ValueError("a square cannot hold prisoners of both colors")
        if not 0 <= self.red | self.blue < 1 << (self.n * self.n):
            raise ValueError(f"occupancy out of range for n={self.n}")

    @classmethod
    def empty(cls, n: int) -> "ColoredBoard":
        return cls(n, 0, 0)

    def board(self) -> Board:
        """The color-erased occupancy."""
        return Board(self.n, self.red | self.blue)

    def color_at(self, s: Square) -> Color | None:
        p = 1 << _bitpos(self.n, *Square(*s))
        if self.red & p:
            return Color.RED
        if self.blue & p:
            return Color.BLUE
        return None

    def count(self, color: Color) -> int:
        return (self.red if color is Color.RED else self.blue).bit_count()

    def rows(self) -> list[str]:
        n = self.n
        out = []
        for r in range(n):
            row = []
            for c in range(n):
                p = 1 << _bitpos(n, r, c)
                row.append("R" if self.red & p else "B" if self.blue & p else ".")
            out.append("".join(row))
        return out

    @classmethod
    def from_rows(cls, rows: list[str]) -> "ColoredBoard":
        n = len(rows)
        check_size(n)
        red = blue = 0
        for r, row in enumerate(rows):
            if len(row) != n:
                raise ParseError(f"row has {len(row)} columns, expected {n}", line=r + 1)
            for c, ch in enumerate(row):
                if ch == "R":
                    red |= 1 << _bitpos(n, r, c)
                elif ch == "B":
                    blue |= 1 << _bitpos(n, r, c)
                elif ch != ".":
                    raise ParseError(f"illegal character {ch!r}", line=r + 1, col=c + 1)
        return cls(n, red, blue)


@dataclass(frozen=True)
class Score:
    red: int
    blue: int
    outcome: Outcome


@dataclass(frozen=True)
class GameState:
    board: ColoredBoard
    to_move: Color
    history: tuple[tuple[Color, Move], ...]
    status: GameStatus


def new_game(n: int) -> GameState:
    """All-guard board, RED to move.  Never starts finished: Rule I applies
    to any all-guard board."""
    check_size(n)
    return GameState(ColoredBoard.empty(n), Color.RED, (), GameStatus.ONGOING)


def colored_legal_moves(s: GameState) -> list[Move]:
    """Same move set as the color-erased board; raises once finished."""
    if s.status is GameStatus.FINISHED:
        raise GameOverError("game is finished")
    return legal_moves(s.board.board())


def play(s: GameState, m: Move) -> GameState:
    """Apply a move for the player on turn.

    Rejections carry a reason: "occupancy" when the move conflicts with the
    current occupancy, "invalid_result" when the move parses against the
    occupancy but the resulting board would break the validity rule.
    """
    if s.status is GameStatus.FINISHED:
        raise GameOverError("game is finished")
    cb = s.board
    n = cb.n
    mover = s.to_move
    if isinstance(m, PlaceMove):
        p = 1 << _bitpos(n, *m.place)
        if (cb.red | cb.blue) & p:
            raise IllegalMoveError(
                f"square {tuple(m.place)} already holds a prisoner", square=m.place, reason="occupancy"
            )
        red, blue = (cb.red | p, cb.blue) if mover is Color.RED else (cb.red, cb.blue | p)
    else:
        rm = 1 << _bitpos(n, *m.remove)
        if not (cb.red | cb.blue) & rm:
            raise IllegalMoveError(
                f"square {tuple(m.remove)} holds no prisoner to remove", square=m.remove, reason="occupancy"
            )
        a1 = 1 << _bitpos(n, *m.add1)
        a2 = 1 << _bitpos(n, *m.add2)
        for sq, bit in ((m.add1, a1), (m.add2, a2)):
            if (cb.red | cb.blue) & bit:
                raise IllegalMoveError(
                    f"square {tuple(sq)} holds no guard to replace", square=sq, reason="occupancy"
                )
        red, blue = cb.red & ~rm, cb.blue & ~rm
        if mover is Color.RED:
            red |= a1 | a2
        else:
            blue |= a1 | a2
    nb = ColoredBoard(n, red, blue)
    erased = nb.board()
    if not is_valid(erased):
        raise IllegalMoveError(
            "resulting board invalid: a prisoner would outnumber its guards",
            square=m.place if isinstance(m, PlaceMove) else m.remove,
            reason="invalid_result",
        )
    return GameState(
        board=nb,
        to_move=mover.other,
        history=s.history + ((mover, m),),
        status=GameStatus.FINISHED if is_maximal(erased) else GameStatus.ONGOING,
    )


def score(s: GameState) -> Score:
    """Live score; the outcome is meaningful once the game is finished."""
    red = s.board.count(Color.RED)
    blue = s.board.count(Color.BLUE)
    outcome = Outcome.RED_WINS if red > blue else Outcome.BLUE_WINS if blue > red else Outcome.TIE
    return Score(red, blue, outcome)


# ---------------------------------------------------------------------------
# AI policies


@dataclass(frozen=True)
class RandomPolicy:
    """Uniform over legal moves; fully determined by (seed, state)."""

    seed: int = 0


@dataclass(frozen=True)
class GreedyPolicy:
    """Maximize own-minus-opponent prisoner count after the move."""


@dataclass(frozen=True)
class MinimaxPolicy:
    """Depth-limited negamax on the prisoner differential."""

    depth: int = 3


Policy = Union[RandomPolicy, GreedyPolicy, MinimaxPolicy]

# any win outranks any differential the heuristic can produce
def _win_value(n: int) -> int:
    return n * n + 1


def _differential(s: GameState) -> int:
    return s.board.count(s.to_move) - s.board.count(s.to_move.other)


def _negamax(s: GameState, depth: int, alpha: int, beta: int, table: dict) -> int:
    """Fail-soft negamax with a transposition table; the value is from the
    perspective of the player to move in s."""
    if s.status is GameStatus.FINISHED:
        d = _differential(s)
        w = _win_value(s.board.n)
        return w if d > 0 else -w if d < 0 else 0
    if depth == 0:
        return _differential(s)
    key = (s.board.red, s.board.blue, depth)
    hit = table.get(key)
    if hit is not None:
        flag, value = hit
        if flag == 0:
            return value
        if flag < 0 and value <= alpha:
            return value
        if flag > 0 and value >= beta:
            return value
    best = -(1 << 30)
    a = alpha
    for m in colored_legal_moves(s):
        v = -_negamax(play(s, m), depth - 1, -beta, -a, table)
        if v > best:
            best = v
        if best > a:
            a = best
        if a >= beta:
            break
    flag = 0 if alpha < best < beta else (-1 if best <= alpha else 1)
    table[key] = (flag, best)
    return best


def minimax_value(s: GameState, depth: int) -> int:
    """Negamax value of s at the given depth, from the mover's perspective."""
    return _negamax(s, depth, -(1 << 30), 1 << 30, {})


def ai_choose(s: GameState, policy: Policy) -> Move:
    """Pick a move; deterministic given (state, policy).  Ties always break
    toward the earliest move in enumeration order."""
    if s.status is GameStatus.FINISHED:
        raise GameOverError("game is finished")
    options = colored_legal_moves(s)

    if isinstance(policy, RandomPolicy):
        key = f"{policy.seed}:{len(s.history)}:{s.board.red:x}:{s.board.blue:x}:{s.to_move.value}"
        return options[Random(key).randrange(len(options))]

    if isinstance(policy, GreedyPolicy):
        best = None
        best_diff = None
        me = s.to_move
        for m in options:
            after = play(s, m)
            diff = after.board.count(me) - after.board.count(me.other)
            if best_diff is None or diff > best_diff:
                best, best_diff = m, diff
        return best

    if isinstance(policy, MinimaxPolicy):
        table: dict = {}
        inf = 1 << 30
        best = None
        alpha = -inf
        for m in options:
            v = -_negamax(play(s, m), policy.depth - 1, -inf, -alpha, table)
            if best is None or v > alpha:
                best, alpha = m, v
        return best

    raise TypeError(f"unknown policy {policy!r}")


# ---------------------------------------------------------------------------
# seats and transcripts

HUMAN_SEAT = "human"


def parse_seat(spec: str) -> Policy | None:
    """Parse a seat spec: "human", "ai:random:<seed>", "ai:greedy",
    "ai:minimax:<depth>".  None means a human seat."""
    parts = spec.strip().lower().split(":")
    if parts == [HUMAN_SEAT]:
        return None
    if parts[0] == "ai" and len(parts) >= 2:
        kind = parts[1]
        if kind == "greedy" and len(parts) == 2:
            return GreedyPolicy()
        try:
            if kind == "random" and len(parts) <= 3:
                return RandomPolicy(seed=int(parts[2]) if len(parts) == 3 else 0)
            if kind == "minimax" and len(parts) <= 3:
                return MinimaxPolicy(depth=int(parts[2]) if len(parts) == 3 else 3)
        except ValueError:
            pass
    raise ValueError(f"bad seat spec {spec!r}")


def format_seat(seat: Policy | None) -> str:
    if seat is None:
        return HUMAN_SEAT
    if isinstance(seat, GreedyPolicy):
        return "ai:greedy"
    if isinstance(seat, RandomPolicy):
        return f"ai:random:{seat.seed}"
    return f"ai:minimax:{seat.depth}"


def transcript_lines(s: GameState) -> list[str]:
    """JSON-lines transcript: a header with n, then one line per move."""
    lines = [json.dumps({"n": s.board.n})]
    for color, m in s.history:
        lines.append(json.dumps({"player": color.value, "move": move_to_json(m)}))
    return lines


def parse_transcript(text: str) -> tuple[int, list[tuple[Color, Move]]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty transcript", line=1)
    try:
        header = json.loads(lines[0])
        n = header["n"]
    except (json.JSONDecodeError, TypeError, KeyError):
        raise ParseError("transcript header must be a JSON object with 'n'", line=1) from None
    entries = []
    for i, ln in enumerate(lines[1:], start=2):
        try:
            obj = json.loads(ln)
            color = Color(obj["player"])
            move = move_from_json(obj["move"])
        except (json.JSONDecodeError, TypeError, KeyError, ValueError) as exc:
            raise ParseError(f"bad transcript entry: {exc}", line=i) from None
        entries.append((color, move))
    return n, entries


def replay_transcript(text: str) -> GameState:
    """Re-play a transcript from the empty board, validating every move and
    the recorded turn order."""
    n, entries = parse_transcript(text)
    s = new_game(n)
    for i, (color, m) in enumerate(entries, start=1):
        if s.status is GameStatus.FINISHED:
            raise ParseError(f"move {i} played after the game finished", line=i + 1)
        if color is not s.to_move:
            raise ParseError(f"move {i} recorded for {color.value} but it is {s.to_move.value}'s turn", line=i + 1)
        s = play(s, m)
    return s


def self_play(n: int, red: Policy, blue: Policy, max_moves: int | None = None) -> GameState:
    """Run a full AI-vs-AI game; max_moves guards against runaway loops."""
    s = new_game(n)
    limit = max_moves if max_moves is not None else n * n + 1
    while s.status is GameStatus.ONGOING:
        if len(s.history) >= limit:
            raise RuntimeError(f"game exceeded {limit} moves")
        policy = red if s.to_move is Color.RED else blue
        s = play(s, ai_choose(s, policy))
    return s
