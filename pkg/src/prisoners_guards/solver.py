"""Exact maximum-prisoner search and enumeration of valid boards.

Everything here works row-wise: a square's validity constraint involves only
its own row and the rows directly above and below, so a row's constraints are
final once the next row is placed.  All entry points share precomputed
transition tables over n-bit row masks:

  - ``top_ok[b]``        rows c below which b is satisfied as row 0
  - ``mid_ok[a][b]``     rows c below which b is satisfied given a above
  - ``bot_ok[a]``        rows b satisfied as the last row given a above

Enumeration is a depth-first walk over rows in ascending mask order, which
emits boards in ascending occupancy-integer order.  The maximum search is the
same walk plus pruning against a memoized exact suffix maximum (an admissible
bound, so no optimum is ever excluded) and against the global closed-form
upper bound.  A counting variant of the suffix table supports exact uniform
sampling of valid boards without enumeration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from random import Random
from typing import Iterator

from .board import Board, Square, Transform, UnsupportedSizeError, canonicalize, is_valid, transform_board
from .bounds import improved_upper_bound
from .moves import PlaceMove, apply_move, has_legal_move

_NEG = -1 << 40

ENUMERATION_LIMIT = 5  # full valid-board streams are only offered up to 5x5
EXACT_SOLVE_LIMIT = 6  # larger boards need an explicit time budget


class SearchTimeout(Exception):
    """Internal: budget exhausted; callers turn this into a non-certified result."""


@dataclass(frozen=True)
class RowTables:
    n: int
    pop: tuple[int, ...]
    top_ok: tuple[tuple[int, ...], ...]  # [b] -> rows c allowed below the top row b
    mid_ok: tuple[tuple[tuple[int, ...], ...], ...]  # [a][b] -> rows c allowed below
    bot_ok: tuple[frozenset, ...]  # [a] -> masks allowed as the bottom row


def _spreads(n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Per row mask and column: bit counts over cols {j-1,j,j+1} and {j-1,j+1}."""
    size = 1 << n
    s3 = [[0] * n for _ in range(size)]
    s2 = [[0] * n for _ in range(size)]
    for r in range(size):
        bit = [(r >> (n - 1 - c)) & 1 for c in range(n)]
        for j in range(n):
            left = bit[j - 1] if j > 0 else 0
            right = bit[j + 1] if j < n - 1 else 0
            s2[r][j] = left + right
            s3[r][j] = left + right + bit[j]
    return s3, s2


@lru_cache(maxsize=8)
def _row_tables(n: int) -> RowTables:
    if n < 2:
        raise UnsupportedSizeError("row tables need n >= 2")
    size = 1 << n
    s3, s2 = _spreads(n)
    # prisoner at column j may have at most floor(deg/2) prisoner neighbors
    brim = [2 if j in (0, n - 1) else 4 for j in range(n)]  # middle row: deg 5 / 8
    rim = [1 if j in (0, n - 1) else 2 for j in range(n)]  # top or bottom row: deg 3 / 5
    cols = [[j for j in range(n) if (b >> (n - 1 - j)) & 1] for b in range(size)]

    top_ok = []
    for b in range(size):
        s2b = s2[b]
        bcols = cols[b]
        allowed = [c for c in range(size) if all(s2b[j] + s3[c][j] <= rim[j] for j in bcols)]
        top_ok.append(tuple(allowed))

    bot_ok = []
    for a in range(size):
        s3a = s3[a]
        ok = frozenset(b for b in range(size) if all(s3a[j] + s2[b][j] <= rim[j] for j in cols[b]))
        bot_ok.append(ok)

    mid_ok = []
    for a in range(size):
        s3a = s3[a]
        per_a = []
        for b in range(size):
            s2b = s2[b]
            bcols = cols[b]
            slack = [brim[j] - s3a[j] - s2b[j] for j in bcols]
            if any(s < 0 for s in slack):
                per_a.append(())
                continue
            per_a.append(tuple(c for c in range(size) if all(s3[c][j] <= s for j, s in zip(bcols, slack))))
        mid_ok.append(tuple(per_a))
    return RowTables(
        n=n,
        pop=tuple(b.bit_count() for b in range(size)),
        top_ok=tuple(top_ok),
        mid_ok=tuple(mid_ok),
        bot_ok=tuple(bot_ok),
    )


def _suffix_max(t: RowTables) -> list[list[int]]:
    """f[i][a*size+b] = max prisoners on rows i+1.. over completions that keep
    rows i.. satisfied, given rows (i-1, i) = (a, b); _NEG when none exists."""
    n = t.n
    size = 1 << n
    f = [None] * n
    last = [0 if b in t.bot_ok[a] else _NEG for a in range(size) for b in range(size)]
    f[n - 1] = last
    for i in range(n - 2, 0, -1):
        nxt = f[i + 1]
        cur = [_NEG] * (size * size)
        for a in range(size):
            base = a * size
            for b in range(size):
                best = _NEG
                brow = b * size
                for c in t.mid_ok[a][b]:
                    v = nxt[brow + c]
                    if v != _NEG:
                        v += t.pop[c]
                        if v > best:
                            best = v
                cur[base + b] = best
        f[i] = cur
    return f


def _suffix_count(t: RowTables) -> list[list[int]]:
    """Same recurrence counting completions instead of maximizing."""
    n = t.n
    size = 1 << n
    f = [None] * n
    f[n - 1] = [1 if b in t.bot_ok[a] else 0 for a in range(size) for b in range(size)]
    for i in range(n - 2, 0, -1):
        nxt = f[i + 1]
        cur = [0] * (size * size)
        for a in range(size):
            base = a * size
            for b in range(size):
                brow = b * size
                cur[base + b] = sum(nxt[brow + c] for c in t.mid_ok[a][b])
        f[i] = cur
    return f


def count_valid(n: int) -> int:
    """Number of valid n x n boards."""
    if n == 1:
        return 2
    t = _row_tables(n)
    counts = _suffix_count(t)
    size = 1 << n
    return sum(counts[1][r0 * size + r1] for r0 in range(size) for r1 in t.top_ok[r0])


@dataclass(frozen=True)
class EnumerationFilter:
    require_maximal: bool = False
    exact_prisoners: int | None = None
    canonical_only: bool = False


def _iter_valid_bits(n: int) -> Iterator[int]:
    """All valid boards as occupancy integers, ascending."""
    if n == 1:
        yield 0
        yield 1
        return
    t = _row_tables(n)
    size = 1 << n

    def rec(i: int, a: int, b: int, acc: int) -> Iterator[int]:
        if i == n - 1:
            if b in t.bot_ok[a]:
                yield acc
            return
        for c in t.mid_ok[a][b]:
            yield from rec(i + 1, b, c, (acc << n) | c)

    for r0 in range(size):
        for r1 in t.top_ok[r0]:
            yield from rec(1, r0, r1, (r0 << n) | r1)


def enumerate_valid(n: int, filt: EnumerationFilter | None = None) -> Iterator[Board]:
    """Stream every valid board of size n (ascending occupancy integer),
    optionally filtered.  Full streams are limited to n <= 5."""
    if not 1 <= n <= ENUMERATION_LIMIT:
        raise UnsupportedSizeError(f"full enumeration supports 1 <= n <= {ENUMERATION_LIMIT}")
    filt = filt or EnumerationFilter()
    if filt.exact_prisoners is not None and not 0 <= filt.exact_prisoners <= n * n:
        raise ValueError("exact_prisoners out of range")
    for bits in _iter_valid_bits(n):
        if filt.exact_prisoners is not None and bits.bit_count() != filt.exact_prisoners:
            continue
        b = Board(n, bits)
        if filt.canonical_only and canonicalize(b)[0].bits != bits:
            continue
        if filt.require_maximal and has_legal_move(b):
            continue
        yield b


def sample_valid(n: int, k: int, seed: int = 0) -> list[Board]:
    """k valid boards drawn independently and uniformly from all valid n x n
    boards, using the exact completion counts (no rejection)."""
    if n == 1:
        rng = Random(seed)
        return [Board(1, rng.randrange(2)) for _ in range(k)]
    t = _row_tables(n)
    counts = _suffix_count(t)
    size = 1 << n
    starts = [(r0, r1, counts[1][r0 * size + r1]) for r0 in range(size) for r1 in t.top_ok[r0]]
    starts = [s for s in starts if s[2] > 0]
    total = sum(w for _, _, w in starts)
    rng = Random(seed)
    out = []
    for _ in range(k):
        x = rng.randrange(total)
        for r0, r1, w in starts:
            if x < w:
                break
            x -= w
        acc = (r0 << n) | r1
        a, b = r0, r1
        for i in range(1, n - 1):
            nxt = counts[i + 1]
            for c in t.mid_ok[a][b]:
                w = nxt[b * size + c]
                if x < w:
                    break
                x -= w
            acc = (acc << n) | c
            a, b = b, c
        out.append(Board(n, acc))
    return out


def random_boards(n: int, k: int, seed: int = 0) -> list[Board]:
    """k boards with uniformly random occupancy (not necessarily valid)."""
    rng = Random(seed)
    return [Board(n, rng.getrandbits(n * n)) for _ in range(k)]


@dataclass(frozen=True)
class SearchStats:
    nodes_expanded: int
    pruned_by_bound: int
    elapsed_seconds: float


@dataclass(frozen=True)
class SolveResult:
    n: int
    p_max: int
    representatives: tuple[Board, ...]
    class_count: int
    certified: bool
    stats: SearchStats


def _stripes_closure(n: int) -> Board:
    """Cheap valid lower-bound board: full prisoner columns 0, 2, 4, ... then
    repeated Rule I while any placement stays valid."""
    b = Board.from_prisoners(n, (Square(r, c) for r in range(n) for c in range(0, n, 2)))
    while True:
        for s in b.squares():
            if b.is_guard(s):
                nb = apply_move(b, PlaceMove(s))
                if is_valid(nb):
                    b = nb
                    break
        else:
            return b


def _one_max_board(n: int, t: RowTables, f, p_max: int) -> int:
    """Greedy walk of the suffix table to one board attaining p_max."""
    size = 1 << n
    for r0 in range(size):
        for r1 in t.top_ok[r0]:
            v = f[1][r0 * size + r1]
            if v != _NEG and t.pop[r0] + t.pop[r1] + v == p_max:
                acc = (r0 << n) | r1
                cnt = t.pop[r0] + t.pop[r1]
                a, b = r0, r1
                for i in range(1, n - 1):
                    nxt = f[i + 1]
                    for c in t.mid_ok[a][b]:
                        v2 = nxt[b * size + c]
                        if v2 != _NEG and cnt + t.pop[c] + v2 == p_max:
                            acc = (acc << n) | c
                            cnt += t.pop[c]
                            a, b = b, c
                            break
                return acc
    raise AssertionError("no board attains the computed maximum")


def max_prisoners(n: int, *, budget: float | None = None) -> SolveResult:
    """Exact maximum prisoner count with all maximum boards up to symmetry.

    Exact (certified) for n <= 6 with no budget needed.  For n >= 7 a budget
    in seconds is required; if it runs out the result carries the best valid
    lower bound found and certified=False.
    """
    started = time.monotonic()
    if n == 1:
        board = Board(1, 1)
        return SolveResult(1, 1, (board,), 1, True, SearchStats(2, 0, time.monotonic() - started))
    if n > EXACT_SOLVE_LIMIT and budget is None:
        raise UnsupportedSizeError(f"n > {EXACT_SOLVE_LIMIT} needs an explicit time budget")
    deadline = started + budget if budget is not None else None

    def check_deadline():
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout

    try:
        t = _row_tables(n)
        check_deadline()
        f = _suffix_max(t)
        check_deadline()
    except SearchTimeout:
        fallback = _stripes_closure(n)
        stats = SearchStats(0, 0, time.monotonic() - started)
        return SolveResult(n, fallback.prisoner_count(), (canonicalize(fallback)[0],), 1, False, stats)

    size = 1 << n
    cap = improved_upper_bound(n)
    p_max = _NEG
    for r0 in range(size):
        for r1 in t.top_ok[r0]:
            v = f[1][r0 * size + r1]
            if v != _NEG:
                p_max = max(p_max, t.pop[r0] + t.pop[r1] + v)
    assert p_max >= 0 and p_max <= cap

    # depth-first collection of every board attaining p_max; the suffix table
    # is an exact optimistic estimate, so only optimal prefixes are expanded
    found: list[int] = []
    nodes = 0
    pruned = 0
    timed_out = False

    def rec(i: int, a: int, b: int, acc: int, cnt: int):
        nonlocal nodes, pruned
        nodes += 1
        if nodes % 4096 == 0:
            check_deadline()
        if i == n - 1:
            if b in t.bot_ok[a] and cnt == p_max:
                found.append(acc)
            return
        nxt = f[i + 1]
        for c in t.mid_ok[a][b]:
            v = nxt[b * size + c]
            if v == _NEG or cnt + t.pop[c] + v < p_max:
                pruned += 1
                continue
            rec(i + 1, b, c, (acc << n) | c, cnt + t.pop[c])

    try:
        for r0 in range(size):
            for r1 in t.top_ok[r0]:
                v = f[1][r0 * size + r1]
                cnt = t.pop[r0] + t.pop[r1]
                if v == _NEG or cnt + v < p_max:
                    pruned += 1
                    continue
                rec(1, r0, r1, (r0 << n) | r1, cnt)
    except SearchTimeout:
        timed_out = True

    if timed_out and not found:
        found.append(_one_max_board(n, t, f, p_max))  # keep one exact witness
    reps = sorted({canonicalize(Board(n, bits))[0].bits for bits in found})
    boards = tuple(Board(n, bits) for bits in reps)
    stats = SearchStats(nodes, pruned, time.monotonic() - started)
    # p_max is certified once the suffix table exists; a timeout during the
    # collection walk can only truncate the list of representatives
    return SolveResult(n, p_max, boards, len(boards), True, stats)


# ---------------------------------------------------------------------------
# corner-block structure checks


# the six possible 3x3 corner blocks with exactly three guards (corner at
# top-left), one per legal spot of the third guard; membership is taken up to
# reflection in the main diagonal
_SIX_PRISONER_BLOCKS = (
    ("..#", "#.#", "###"),
    ("#.#", "..#", "###"),
    ("#.#", "#.#", ".##"),
    ("#..", "#.#", "###"),
    ("#.#", "#..", "###"),
    ("#.#", "#.#", "#.#"),
)


def _block_key(rows: tuple[str, ...]) -> int:
    key = 0
    for row in rows:
        for ch in row:
            key = key << 1 | (ch == "#")
    return key


def _key_rows(key: int, m: int) -> tuple[str, ...]:
    flat = "".join("#" if key >> (m * m - 1 - i) & 1 else "." for i in range(m * m))
    return tuple(flat[r * m : (r + 1) * m] for r in range(m))


def _transpose_key(key: int, m: int) -> int:
    rows = _key_rows(key, m)
    return _block_key(tuple("".join(rows[c][r] for c in range(m)) for r in range(m)))


def _allowed_six_prisoner_keys() -> frozenset:
    keys = set()
    for rows in _SIX_PRISONER_BLOCKS:
        k = _block_key(rows)
        keys.add(k)
        keys.add(_transpose_key(k, 3))
    return frozenset(keys)


_ALLOWED6 = _allowed_six_prisoner_keys()

# orient each corner so its corner square becomes block position (0, 0)
_CORNER_FRAMES = {
    "ul": Transform.IDENTITY,
    "ur": Transform.FLIP_H,
    "ll": Transform.FLIP_V,
    "lr": Transform.ROT180,
}


def corner_block(b: Board, corner: str, m: int) -> tuple[str, ...]:
    """The m x m corner block, reoriented so the board corner is at (0, 0)."""
    oriented = transform_board(b, _CORNER_FRAMES[corner])
    return tuple(row[:m] for row in oriented.rows()[:m])


@dataclass
class CornerLemmaReport:
    """Outcome of checking corner-block structure over valid boards.

    Three checks: (a) every 2x2 corner block keeps at least one guard
    (n >= 2); (b) every 3x3 corner block keeps at least three guards, and
    with exactly three the block square diagonally opposite the corner holds
    a prisoner (n > 3); (c) every 3x3 corner block holding six prisoners is
    one of the six known patterns up to diagonal reflection (n > 3).
    """

    n: int
    mode: str  # "exhaustive" or "sampled"
    checked: int
    two_by_two_counterexamples: list[Board] = field(default_factory=list)
    min_guard_counterexamples: list[Board] = field(default_factory=list)
    pattern_counterexamples: list[Board] = field(default_factory=list)
    observed_six_prisoner_blocks: frozenset = frozenset()

    @property
    def counterexample_count(self) -> int:
        return (
            len(self.two_by_two_counterexamples)
            + len(self.min_guard_counterexamples)
            + len(self.pattern_counterexamples)
        )

    @property
    def ok(self) -> bool:
        return self.counterexample_count == 0


_WITNESS_CAP = 5


def _check_block3(key: int, report: CornerLemmaReport, witness, observed: set):
    prisoners = key.bit_count()
    guards = 9 - prisoners
    if guards < 3 or (guards == 3 and not key & 1):  # bit 0 = block square (2, 2)
        if len(report.min_guard_counterexamples) < _WITNESS_CAP:
            report.min_guard_counterexamples.append(witness())
    if prisoners == 6:
        observed.add(key)
        if key not in _ALLOWED6 and len(report.pattern_counterexamples) < _WITNESS_CAP:
            report.pattern_counterexamples.append(witness())


def _check_board_corners(b: Board, report: CornerLemmaReport, observed: set):
    for corner in _CORNER_FRAMES:
        k2 = _block_key(corner_block(b, corner, 2))
        if k2 == 0b1111 and len(report.two_by_two_counterexamples) < _WITNESS_CAP:
            report.two_by_two_counterexamples.append(b)
        if b.n > 3:
            _check_block3(_block_key(corner_block(b, corner, 3)), report, lambda: b, observed)


def _reach_table(t: RowTables) -> list[dict]:
    """reach[i][(a, b)] = a predecessor row (or None at i=1) proving rows
    0..i can be placed with rows 0..i-1 satisfied and (r_{i-1}, r_i)=(a, b)."""
    n = t.n
    size = 1 << n
    reach = [None] * n
    reach[1] = {(r0, r1): None for r0 in range(size) for r1 in t.top_ok[r0]}
    for i in range(2, n):
        cur = {}
        for (a, b) in reach[i - 1]:
            for c in t.mid_ok[a][b]:
                if (b, c) not in cur:
                    cur[(b, c)] = a
        reach[i] = cur
    return reach


def _complete_forward(n: int, t: RowTables, f, rows: list[int]) -> Board:
    """Extend verified prefix rows (len >= 2) to a full valid board using the
    suffix table; the caller guarantees one exists."""
    size = 1 << n
    a, b = rows[-2], rows[-1]
    for i in range(len(rows) - 1, n - 1):
        nxt = f[i + 1]
        for c in t.mid_ok[a][b]:
            if nxt[b * size + c] != _NEG:
                rows.append(c)
                a, b = b, c
                break
        else:
            raise AssertionError("prefix marked completable but is not")
    acc = 0
    for r in rows:
        acc = (acc << n) | r
    board = Board(n, acc)
    assert is_valid(board)
    return board


def _complete_backward(n: int, t: RowTables, reach, rows_tail: list[int]) -> Board:
    """Extend verified suffix rows (the last len(rows_tail) rows) back to row 0."""
    rows = list(rows_tail)
    i = n - len(rows_tail) + 1  # layer index of the pair (rows[0], rows[1])
    a, b = rows[0], rows[1]
    while i > 1:
        prev = reach[i][(a, b)]
        rows.insert(0, prev)
        a, b = prev, a
        i -= 1
    acc = 0
    for r in rows:
        acc = (acc << n) | r
    board = Board(n, acc)
    assert is_valid(board)
    return board


def verify_corner_lemmas(n: int, *, samples: int = 10000, seed: int = 0) -> CornerLemmaReport:
    """Check the corner-block structure of every valid board (2 <= n <= 5,
    exhaustive over realizable corner contents) or of a uniform sample (n=6).

    For n in {4, 5} the check enumerates exactly the corner-row prefixes and
    suffixes that extend to a valid board (via the transition tables), which
    covers all valid boards without materializing them; any violation is
    reported with a reconstructed witness board.
    """
    if not 2 <= n <= 6:
        raise UnsupportedSizeError("corner lemma checks support 2 <= n <= 6")

    observed: set[int] = set()
    if n in (2, 3):
        report = CornerLemmaReport(n=n, mode="exhaustive", checked=0)
        for b in enumerate_valid(n):
            report.checked += 1
            _check_board_corners(b, report, observed)
        report.observed_six_prisoner_blocks = frozenset(_key_rows(k, 3) for k in observed)
        return report

    if n == 6:
        report = CornerLemmaReport(n=n, mode="sampled", checked=samples)
        for b in sample_valid(n, samples, seed):
            _check_board_corners(b, report, observed)
        report.observed_six_prisoner_blocks = frozenset(_key_rows(k, 3) for k in observed)
        return report

    t = _row_tables(n)
    f = _suffix_max(t)
    reach = _reach_table(t)
    size = 1 << n
    report = CornerLemmaReport(n=n, mode="exhaustive", checked=0)

    def top_cols(row: int, frame: str) -> str:
        bits = format(row, f"0{n}b").translate({ord("1"): "#", ord("0"): "."})
        return bits[:3] if frame == "l" else bits[::-1][:3]

    def prefix_witness(rows):
        return lambda: _complete_forward(n, t, f, list(rows))

    def suffix_witness(rows):
        return lambda: _complete_backward(n, t, reach, list(rows))

    # 2x2 blocks from realizable top/bottom row pairs
    for r0 in range(size):
        for r1 in t.top_ok[r0]:
            if f[1][r0 * size + r1] == _NEG:
                continue
            report.checked += 1
            for frame in ("l", "r"):
                k = _block_key((top_cols(r0, frame)[:2], top_cols(r1, frame)[:2]))
                if k == 0b1111 and len(report.two_by_two_counterexamples) < _WITNESS_CAP:
                    report.two_by_two_counterexamples.append(prefix_witness([r0, r1])())
    for (a, b), _pred in reach[n - 1].items():
        if b not in t.bot_ok[a]:
            continue
        for frame in ("l", "r"):
            k = _block_key((top_cols(b, frame)[:2], top_cols(a, frame)[:2]))
            if k == 0b1111 and len(report.two_by_two_counterexamples) < _WITNESS_CAP:
                report.two_by_two_counterexamples.append(suffix_witness([a, b])())

    # 3x3 blocks from realizable top/bottom row triples
    for r0 in range(size):
        for r1 in t.top_ok[r0]:
            for r2 in t.mid_ok[r0][r1]:
                if f[2][r1 * size + r2] == _NEG:
                    continue
                report.checked += 1
                for frame in ("l", "r"):
                    rows3 = (top_cols(r0, frame), top_cols(r1, frame), top_cols(r2, frame))
                    _check_block3(_block_key(rows3), report, prefix_witness([r0, r1, r2]), observed)
    for (a, b), _pred in reach[n - 2].items():
        for c in t.mid_ok[a][b]:
            if c not in t.bot_ok[b]:
                continue
            for frame in ("l", "r"):
                rows3 = (top_cols(c, frame), top_cols(b, frame), top_cols(a, frame))
                _check_block3(_block_key(rows3), report, suffix_witness([a, b, c]), observed)

    report.observed_six_prisoner_blocks = frozenset(_key_rows(k, 3) for k in observed)
    return report


def brute_force_max(n: int) -> int:
    """Independent oracle: maximum prisoner count over the full valid stream."""
    return max(b.prisoner_count() for b in enumerate_valid(n))


def maximal_class_census(n: int, prisoners: int | None = None) -> dict[int, int]:
    """Dihedral classes of maximal boards by prisoner count (n <= 5 only).
    Returns {prisoner_count: class_count}; optionally restricted to one count."""
    census: dict[int, int] = {}
    filt = EnumerationFilter(require_maximal=True, canonical_only=True, exact_prisoners=prisoners)
    for b in enumerate_valid(n, filt):
        census[b.prisoner_count()] = census.get(b.prisoner_count(), 0) + 1
    return census
