"""Rule I / Rule II moves on uncolored boards.

Rule I turns one guard into a prisoner.  Rule II turns one prisoner into a
guard and two *other* guards into prisoners; the two added squares must hold
guards on the pre-move board, so the square just vacated is never a target.
Every move raises the prisoner count by exactly one.  Legality means the
resulting board is valid; occupancy preconditions are checked against the
pre-move board, validity only on the final board of the move.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .board import Board, InvalidBoardError, Square, _bitpos, _neighbor_tables, is_valid


class IllegalMoveError(Exception):
    """A move that cannot be played; reason is "occupancy" when the move
    conflicts with current occupancy and "invalid_result" when the resulting
    board would violate the validity rule."""

    def __init__(self, message: str, square: Square | None = None, reason: str = "occupancy"):
        super().__init__(message)
        self.square = square
        self.reason = reason


@dataclass(frozen=True)
class PlaceMove:
    """Rule I: place a prisoner on a guard square."""

    place: Square

    def __post_init__(self):
        object.__setattr__(self, "place", Square(*self.place))


@dataclass(frozen=True)
class SwapMove:
    """Rule II: remove one prisoner, add prisoners on two other guard squares.

    The added pair is unordered and stored in row-major order.
    """

    remove: Square
    add1: Square
    add2: Square

    def __post_init__(self):
        remove = Square(*self.remove)
        a, b = sorted((Square(*self.add1), Square(*self.add2)))
        if a == b:
            raise IllegalMoveError("the two added squares must differ", square=a)
        if remove in (a, b):
            raise IllegalMoveError("added square equals the removed square", square=remove)
        object.__setattr__(self, "remove", remove)
        object.__setattr__(self, "add1", a)
        object.__setattr__(self, "add2", b)


Move = Union[PlaceMove, SwapMove]


def move_to_json(m: Move) -> dict:
    if isinstance(m, PlaceMove):
        return {"kind": "I", "place": [m.place.row, m.place.col]}
    return {
        "kind": "II",
        "remove": [m.remove.row, m.remove.col],
        "add": [[m.add1.row, m.add1.col], [m.add2.row, m.add2.col]],
    }


def move_from_json(obj: dict) -> Move:
    try:
        kind = obj["kind"]
        if kind == "I":
            return PlaceMove(Square(*obj["place"]))
        if kind == "II":
            (a1, a2) = obj["add"]
            return SwapMove(Square(*obj["remove"]), Square(*a1), Square(*a2))
    except IllegalMoveError:
        raise
    except (KeyError, TypeError, ValueError):
        pass
    raise ValueError(f"malformed move JSON: {obj!r}")


def apply_move(b: Board, m: Move) -> Board:
    """Apply a move, checking occupancy preconditions only.

    The result is returned even if it is not a valid board; legality is a
    separate check (see legal_moves).
    """
    n = b.n
    if isinstance(m, PlaceMove):
        s = m.place
        if b.is_prisoner(s):
            raise IllegalMoveError(f"square {tuple(s)} already holds a prisoner", square=s)
        return b.with_prisoner(s)
    if not b.is_prisoner(m.remove):
        raise IllegalMoveError(f"square {tuple(m.remove)} holds no prisoner to remove", square=m.remove)
    for s in (m.add1, m.add2):
        if b.is_prisoner(s):
            raise IllegalMoveError(f"square {tuple(s)} holds no guard to replace", square=s)
    bits = b.bits & ~(1 << _bitpos(n, *m.remove))
    bits |= 1 << _bitpos(n, *m.add1)
    bits |= 1 << _bitpos(n, *m.add2)
    return Board(n, bits)


def _result_ok(bits: int, touched: int, masks, degs) -> bool:
    """Check the validity constraint on the new board for the touched squares
    and any prisoners adjacent to them; untouched prisoners whose neighborhood
    only lost prisoners cannot have become unprotected."""
    affected = touched
    t = touched
    while t:
        p = (t & -t).bit_length() - 1
        t &= t - 1
        affected |= bits & masks[p]
    affected &= bits
    while affected:
        p = (affected & -affected).bit_length() - 1
        affected &= affected - 1
        if 2 * (bits & masks[p]).bit_count() > degs[p]:
            return False
    return True


def _iter_legal(b: Board) -> Iterator[Move]:
    if not is_valid(b):
        raise InvalidBoardError("move generation requires a valid board")
    n = b.n
    nn = n * n
    masks, degs = _neighbor_tables(n)
    bits = b.bits
    guard_squares = []
    prisoner_squares = []
    for k in range(nn):  # row-major, so moves come out in row-major order
        p = nn - 1 - k
        (prisoner_squares if bits >> p & 1 else guard_squares).append(Square(k // n, k % n))

    for s in guard_squares:
        pos = 1 << _bitpos(n, *s)
        if _result_ok(bits | pos, pos, masks, degs):
            yield PlaceMove(s)

    for rm in prisoner_squares:
        bits_wo = bits & ~(1 << _bitpos(n, *rm))
        for i, g1 in enumerate(guard_squares):
            b1 = 1 << _bitpos(n, *g1)
            for g2 in guard_squares[i + 1 :]:
                b2 = 1 << _bitpos(n, *g2)
                if _result_ok(bits_wo | b1 | b2, b1 | b2, masks, degs):
                    yield SwapMove(rm, g1, g2)


def legal_moves(b: Board) -> list[Move]:
    """All moves that keep the board valid: Rule I moves in row-major order of
    the placed square, then Rule II moves ordered by (remove, add1, add2)."""
    return list(_iter_legal(b))


def has_legal_move(b: Board) -> bool:
    for _ in _iter_legal(b):
        return True
    return False


def is_maximal(b: Board) -> bool:
    """True iff no single Rule I or Rule II application yields a valid board."""
    return not has_legal_move(b)
