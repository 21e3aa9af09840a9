"""Board core for Prisoners and Guards.

A board is an n x n grid where every square holds either a prisoner or a
guard.  Occupancy is stored as a single integer bitset in row-major order
with square (0, 0) as the most significant bit, so comparing two boards as
unsigned integers compares their row-major bitstrings lexicographically.
That ordering is what canonicalization and enumeration use, which keeps
results bit-exact across runs.

Adjacency is king adjacency: the up-to-8 squares at Chebyshev distance 1.
A board is *valid* when every prisoner square has at least as many guards
as prisoners among its neighbors.  Guards impose no constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, NamedTuple

MAX_SIZE = 16

PRISONER_CHARS = frozenset("#RB")
GUARD_CHAR = "."


class UnsupportedSizeError(ValueError):
    """Raised for board sizes outside the range an operation supports."""


class InvalidBoardError(ValueError):
    """Raised when an operation requires a valid board and got an invalid one."""


class ParseError(ValueError):
    """Board text/JSON did not parse; carries a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.col = col


class Square(NamedTuple):
    row: int
    col: int


class CellClass(Enum):
    CORNER = "corner"
    EDGE = "edge"
    INTERIOR = "interior"


class Transform(Enum):
    """The eight dihedral symmetries of the square, as (row, col) maps."""

    IDENTITY = "identity"
    ROT90 = "rot90"
    ROT180 = "rot180"
    ROT270 = "rot270"
    FLIP_H = "flip_h"  # mirror left-right
    FLIP_V = "flip_v"  # mirror top-bottom
    TRANSPOSE = "transpose"  # main diagonal
    ANTI_TRANSPOSE = "anti_transpose"


_TRANSFORM_MAPS = {
    Transform.IDENTITY: lambda r, c, n: (r, c),
    Transform.ROT90: lambda r, c, n: (c, n - 1 - r),
    Transform.ROT180: lambda r, c, n: (n - 1 - r, n - 1 - c),
    Transform.ROT270: lambda r, c, n: (n - 1 - c, r),
    Transform.FLIP_H: lambda r, c, n: (r, n - 1 - c),
    Transform.FLIP_V: lambda r, c, n: (n - 1 - r, c),
    Transform.TRANSPOSE: lambda r, c, n: (c, r),
    Transform.ANTI_TRANSPOSE: lambda r, c, n: (n - 1 - c, n - 1 - r),
}


def check_size(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_SIZE:
        raise UnsupportedSizeError(f"board size must be an integer in 1..{MAX_SIZE}, got {n!r}")
    return n


def _check_square(s: Square, n: int) -> Square:
    r, c = s
    if not (0 <= r < n and 0 <= c < n):
        raise ValueError(f"square {tuple(s)} out of bounds for n={n}")
    return Square(r, c)


def _bitpos(n: int, r: int, c: int) -> int:
    # square (0, 0) is the most significant bit of the n*n-bit occupancy
    return n * n - 1 - (r * n + c)


@lru_cache(maxsize=None)
def _neighbor_tables(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Per bit position: neighbor bitmask and neighbor count (degree)."""
    masks = [0] * (n * n)
    degs = [0] * (n * n)
    for r in range(n):
        for c in range(n):
            m = 0
            d = 0
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    if dr == 0 and dc == 0:
                        continue
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < n and 0 <= cc < n:
                        m |= 1 << _bitpos(n, rr, cc)
                        d += 1
            p = _bitpos(n, r, c)
            masks[p] = m
            degs[p] = d
    return tuple(masks), tuple(degs)


@lru_cache(maxsize=None)
def _class_masks(n: int) -> tuple[int, int, int]:
    """(corner, edge, interior) occupancy masks; n=1 counts as a corner."""
    corner = edge = interior = 0
    for r in range(n):
        for c in range(n):
            b = 1 << _bitpos(n, r, c)
            on_r = r in (0, n - 1)
            on_c = c in (0, n - 1)
            if on_r and on_c:
                corner |= b
            elif on_r or on_c:
                edge |= b
            else:
                interior |= b
    return corner, edge, interior


@lru_cache(maxsize=None)
def _transform_perms(n: int) -> dict[Transform, tuple[int, ...]]:
    """perm[p] = destination bit position of the content at position p."""
    perms = {}
    for t, fmap in _TRANSFORM_MAPS.items():
        perm = [0] * (n * n)
        for r in range(n):
            for c in range(n):
                r2, c2 = fmap(r, c, n)
                perm[_bitpos(n, r, c)] = _bitpos(n, r2, c2)
        perms[t] = tuple(perm)
    return perms


@dataclass(frozen=True)
class Board:
    """Immutable occupancy bitset; bit set = prisoner, clear = guard."""

    n: int
    bits: int = 0

    def __post_init__(self):
        check_size(self.n)
        if not 0 <= self.bits < 1 << (self.n * self.n):
            raise ValueError(f"occupancy out of range for n={self.n}")

    @classmethod
    def empty(cls, n: int) -> "Board":
        return cls(n, 0)

    @classmethod
    def from_prisoners(cls, n: int, squares: Iterator[Square]) -> "Board":
        bits = 0
        for s in squares:
            r, c = _check_square(Square(*s), n)
            bits |= 1 << _bitpos(n, r, c)
        return cls(n, bits)

    @classmethod
    def from_rows(cls, rows: list[str]) -> "Board":
        return parse_board(f"{len(rows)}\n" + "\n".join(rows))

    def is_prisoner(self, s: Square) -> bool:
        r, c = _check_square(Square(*s), self.n)
        return bool(self.bits >> _bitpos(self.n, r, c) & 1)

    def is_guard(self, s: Square) -> bool:
        return not self.is_prisoner(s)

    def prisoner_count(self) -> int:
        return self.bits.bit_count()

    def guard_count(self) -> int:
        return self.n * self.n - self.bits.bit_count()

    def prisoners(self) -> Iterator[Square]:
        n = self.n
        for k in range(n * n):
            if self.bits >> (n * n - 1 - k) & 1:
                yield Square(k // n, k % n)

    def squares(self) -> Iterator[Square]:
        for r in range(self.n):
            for c in range(self.n):
                yield Square(r, c)

    def with_prisoner(self, s: Square) -> "Board":
        r, c = _check_square(Square(*s), self.n)
        return Board(self.n, self.bits | 1 << _bitpos(self.n, r, c))

    def with_guard(self, s: Square) -> "Board":
        r, c = _check_square(Square(*s), self.n)
        return Board(self.n, self.bits & ~(1 << _bitpos(self.n, r, c)))

    def rows(self) -> list[str]:
        n = self.n
        out = []
        for r in range(n):
            out.append("".join("#" if self.bits >> _bitpos(n, r, c) & 1 else "." for c in range(n)))
        return out

    def __str__(self) -> str:
        return "\n".join(self.rows())


def neighbors(s: Square, n: int) -> set[Square]:
    """All in-bounds squares at Chebyshev distance 1 from s (king moves)."""
    check_size(n)
    r, c = _check_square(Square(*s), n)
    out = set()
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            rr, cc = r + dr, c + dc
            if 0 <= rr < n and 0 <= cc < n:
                out.add(Square(rr, cc))
    return out


def classify(s: Square, n: int) -> CellClass:
    """CORNER, EDGE, or INTERIOR; the lone square of a 1x1 board is a CORNER."""
    check_size(n)
    r, c = _check_square(Square(*s), n)
    on_r = r in (0, n - 1)
    on_c = c in (0, n - 1)
    if on_r and on_c:
        return CellClass.CORNER
    if on_r or on_c:
        return CellClass.EDGE
    return CellClass.INTERIOR


def prisoner_neighbor_count(b: Board, s: Square) -> int:
    """Number of prisoners on squares adjacent to s (s itself not counted)."""
    r, c = _check_square(Square(*s), b.n)
    masks, _ = _neighbor_tables(b.n)
    return (b.bits & masks[_bitpos(b.n, r, c)]).bit_count()


def is_valid(b: Board) -> bool:
    """True iff every prisoner has at least as many guard as prisoner neighbors.

    Equivalently 2 * x*(s) <= deg(s) for every prisoner square s, where x* is
    the prisoner-neighbor count.  Guards are unconstrained; the all-guard
    board is valid, and so is the 1x1 board with a prisoner (no neighbors).
    """
    masks, degs = _neighbor_tables(b.n)
    bits = b.bits
    m = bits
    while m:
        p = (m & -m).bit_length() - 1
        m &= m - 1
        if 2 * (bits & masks[p]).bit_count() > degs[p]:
            return False
    return True


@dataclass(frozen=True)
class ClassCounts:
    """Census of occupants by square class for boards with n >= 2."""

    p_corner: int
    p_edge: int
    p_interior: int
    g_corner: int
    g_edge: int
    g_interior: int

    @property
    def prisoners(self) -> int:
        return self.p_corner + self.p_edge + self.p_interior

    @property
    def guards(self) -> int:
        return self.g_corner + self.g_edge + self.g_interior


def class_counts(b: Board) -> ClassCounts:
    """Count prisoners/guards per class; requires n >= 2 (the 4 / 4(n-2) /
    (n-2)^2 class census degenerates at n=1)."""
    if b.n < 2:
        raise UnsupportedSizeError("class counts need n >= 2")
    corner, edge, interior = _class_masks(b.n)
    pc = (b.bits & corner).bit_count()
    pe = (b.bits & edge).bit_count()
    pi = (b.bits & interior).bit_count()
    return ClassCounts(
        p_corner=pc,
        p_edge=pe,
        p_interior=pi,
        g_corner=4 - pc,
        g_edge=4 * (b.n - 2) - pe,
        g_interior=(b.n - 2) ** 2 - pi,
    )


def transform_board(b: Board, t: Transform) -> Board:
    perm = _transform_perms(b.n)[t]
    bits = b.bits
    out = 0
    while bits:
        p = (bits & -bits).bit_length() - 1
        bits &= bits - 1
        out |= 1 << perm[p]
    return Board(b.n, out)


def canonicalize(b: Board) -> tuple[Board, Transform]:
    """Smallest occupancy integer over the 8 dihedral transforms.

    Two boards are equivalent up to rotation/reflection iff their canonical
    forms are equal.  Returns the transform that achieves the canonical form
    (first in Transform declaration order on ties, so symmetric boards report
    IDENTITY).
    """
    best_bits = None
    best_t = None
    for t in Transform:
        tb = transform_board(b, t)
        if best_bits is None or tb.bits < best_bits:
            best_bits = tb.bits
            best_t = t
    return Board(b.n, best_bits), best_t


def is_canonical(b: Board) -> bool:
    return canonicalize(b)[0].bits == b.bits


def parse_board(text: str) -> Board:
    """Parse the text format: a line with n, then n rows over '.', '#', 'R', 'B'.

    '#', 'R' and 'B' all parse as prisoner (color is not stored here);
    '.' is a guard.  Trailing newline optional.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"expected board size, got {lines[0]!r}", line=1) from None
    if not 1 <= n <= MAX_SIZE:
        raise ParseError(f"board size {n} out of range 1..{MAX_SIZE}", line=1)
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} rows, got {len(lines) - 1}", line=min(len(lines), n) + 1)
    bits = 0
    for r, row in enumerate(lines[1:]):
        if len(row) != n:
            raise ParseError(f"row has {len(row)} columns, expected {n}", line=r + 2, col=len(row) + 1)
        for c, ch in enumerate(row):
            if ch in PRISONER_CHARS:
                bits |= 1 << _bitpos(n, r, c)
            elif ch != GUARD_CHAR:
                raise ParseError(f"illegal character {ch!r}", line=r + 2, col=c + 1)
    return Board(n, bits)


def serialize_board(b: Board) -> str:
    return f"{b.n}\n" + "\n".join(b.rows()) + "\n"


def board_to_json(b: Board) -> dict:
    return {"n": b.n, "rows": b.rows()}


def board_from_json(obj: dict) -> Board:
    if not isinstance(obj, dict) or "n" not in obj or "rows" not in obj:
        raise ParseError("board JSON needs 'n' and 'rows'")
    n = obj["n"]
    rows = obj["rows"]
    if not isinstance(n, int) or not isinstance(rows, list) or any(not isinstance(r, str) for r in rows):
        raise ParseError("board JSON has wrong field types")
    return parse_board(f"{n}\n" + "\n".join(rows))
