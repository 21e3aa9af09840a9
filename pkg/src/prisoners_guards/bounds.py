"""Deficiency matrix, the exact prisoner-count identity, and upper bounds.

Each square gets an *expectation*: a constant depending only on its class
(corner/edge/interior) and occupant.  The deficiency of a square is its
expectation minus its prisoner-neighbor count, and the net deficiency D is
the sum over all squares.  The census identity

    10*P = 6*n^2 - 8*n + 3*P_E + 6*P_C - D

holds for every board, valid or not, because it is the sum of per-square
identities that hold by construction of the deficiency.  Combining the
identity with lower bounds on D yields the closed-form upper bounds
floor((2n^2+n)/3) and floor((7n^2+4n)/11) on the maximum prisoner count.

All arithmetic here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .board import (
    Board,
    CellClass,
    InvalidBoardError,
    UnsupportedSizeError,
    _bitpos,
    _neighbor_tables,
    class_counts,
    classify,
    is_valid,
)

# expectation by (class, holds-prisoner)
_EXPECTATION = {
    (CellClass.CORNER, True): 1,
    (CellClass.CORNER, False): 2,
    (CellClass.EDGE, True): 2,
    (CellClass.EDGE, False): 4,
    (CellClass.INTERIOR, True): 4,
    (CellClass.INTERIOR, False): 6,
}


def expectation(cell_class: CellClass, prisoner: bool) -> int:
    """Expected prisoner-neighbor count for a square of the given class and
    occupant (prisoner=True means the square holds a prisoner)."""
    return _EXPECTATION[(cell_class, bool(prisoner))]


@dataclass(frozen=True)
class DeficiencyMatrix:
    n: int
    delta: tuple[tuple[int, ...], ...]
    net: int


def deficiency(b: Board) -> DeficiencyMatrix:
    """delta[i][j] = expectation - prisoner_neighbor_count at (i, j); n >= 2."""
    if b.n < 2:
        raise UnsupportedSizeError("deficiency needs n >= 2")
    n = b.n
    masks, _ = _neighbor_tables(n)
    bits = b.bits
    rows = []
    net = 0
    for r in range(n):
        row = []
        for c in range(n):
            p = _bitpos(n, r, c)
            x_star = (bits & masks[p]).bit_count()
            d = _EXPECTATION[(classify((r, c), n), bool(bits >> p & 1))] - x_star
            row.append(d)
            net += d
        rows.append(tuple(row))
    return DeficiencyMatrix(n, tuple(rows), net)


def identity_residual(b: Board) -> int:
    """10*P - (6*n^2 - 8*n + 3*P_E + 6*P_C - net_deficiency); zero for every
    board because the underlying per-square identities hold unconditionally."""
    if b.n < 2:
        raise UnsupportedSizeError("identity needs n >= 2")
    counts = class_counts(b)
    net = deficiency(b).net
    n = b.n
    p = b.prisoner_count()
    return 10 * p - (6 * n * n - 8 * n + 3 * counts.p_edge + 6 * counts.p_corner - net)


def crude_upper_bound(n: int) -> int:
    """floor((2n^2 + n) / 3); for n=1 the framework is degenerate but the
    formula still evaluates (to 1)."""
    if n < 1:
        raise UnsupportedSizeError("n must be >= 1")
    return (2 * n * n + n) // 3


def improved_upper_bound(n: int) -> int:
    """floor((7n^2 + 4n) / 11), the sharper of the two closed-form bounds."""
    if n < 1:
        raise UnsupportedSizeError("n must be >= 1")
    return (7 * n * n + 4 * n) // 11


@dataclass(frozen=True)
class DeficiencyBoundsReport:
    """Net deficiency against its two lower bounds on a valid board."""

    net: int
    class_weighted_bound: int  # -(G_C + G_E + 2*G_I)
    guard_bound: int  # -G
    holds_class_weighted: bool
    holds_guard: bool

    @property
    def ok(self) -> bool:
        return self.holds_class_weighted and self.holds_guard


def check_deficiency_lower_bounds(b: Board) -> DeficiencyBoundsReport:
    """Evaluate net >= -(G_C+G_E+2*G_I) and net >= -G; both lower bounds are
    stated for valid boards only, so an invalid board is refused."""
    if b.n < 2:
        raise UnsupportedSizeError("deficiency bounds need n >= 2")
    if not is_valid(b):
        raise InvalidBoardError("deficiency lower bounds are only claimed for valid boards")
    counts = class_counts(b)
    net = deficiency(b).net
    class_weighted = -(counts.g_corner + counts.g_edge + 2 * counts.g_interior)
    guard = -counts.guards
    return DeficiencyBoundsReport(
        net=net,
        class_weighted_bound=class_weighted,
        guard_bound=guard,
        holds_class_weighted=net >= class_weighted,
        holds_guard=net >= guard,
    )
