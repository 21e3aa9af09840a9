"""Golden board fixtures used across the suite.

Each constant is a list of row strings ('#' prisoner, '.' guard); build()
turns one into a Board.  The maximal/maximum fixtures are known-good
configurations of the game; the corner-block patterns are the six possible
3x3 corner blocks that keep exactly three guards.
"""

from prisoners_guards import Board

def build(rows):
    return Board.from_rows(list(rows))


# the unique maximal 3x3 board up to symmetry: two full prisoner columns
MAX_3X3 = ["#.#", "#.#", "#.#"]

# valid 3x3 boards (3-5 prisoners) that admit no Rule I move but do admit
# a Rule II move, so they are not maximal
RULE1_STUCK_3X3 = [
    [".#.", ".#.", ".#."],
    [".#.", "#.#", ".#."],
    [".#.", ".#.", "#.#"],
    [".#.", ".##", "#.."],
    ["#.#", ".#.", "#.#"],
    [".#.", "#.#", "#.#"],
    ["##.", "..#", "#.#"],
]

# maximal 4x4 boards with 8 prisoners (one fewer than the maximum)
MAXIMAL_8_4X4 = [
    [".##.", "#..#", "#..#", ".##."],
    ["#..#", ".##.", ".##.", "#..#"],
    ["#..#", "#..#", "#..#", "#..#"],
    ["#..#", ".##.", "#..#", ".##."],
    [".##.", "#..#", "#..#", "#..#"],
    ["#.#.", ".#.#", "#.#.", ".#.#"],
    ["#..#", ".##.", "#.#.", ".#.#"],
    ["#.##", "#...", "...#", "##.#"],
]

# the three maximum 4x4 boards (9 prisoners), pairwise inequivalent
MAXIMUM_4X4 = [
    [".###", "#...", "#.##", "#.#."],
    ["####", "....", "#.##", "#.#."],
    ["#.##", ".#..", "#.##", "#.#."],
]

# maximum 5x5 (15) and 6x6 (22) boards
MAX_5X5 = ["#.#.#"] * 5
MAX_6X6 = ["#.##.#", "#.#..#", "#.##.#", "#.##.#", "#.#..#", "#.##.#"]

# 4x4 checkerboard: valid but not maximal; its deficiency matrix and net
# deficiency are pinned as a golden value
CHECKERBOARD_4X4 = ["#.#.", ".#.#", "#.#.", ".#.#"]
CHECKERBOARD_4X4_DELTA = (
    (0, 1, 0, 0),
    (1, 0, 2, 0),
    (0, 2, 0, 1),
    (0, 0, 1, 0),
)
CHECKERBOARD_4X4_NET = 8

# the six possible 3x3 corner blocks with exactly three guards (corner at
# top-left); any such block in a valid board matches one of these up to
# reflection in the main diagonal
CORNER_BLOCKS_3_GUARDS = [
    ["..#", "#.#", "###"],
    ["#.#", "..#", "###"],
    ["#.#", "#.#", ".##"],
    ["#..", "#.#", "###"],
    ["#.#", "#..", "###"],
    ["#.#", "#.#", "#.#"],
]

KNOWN_P = {1: 1, 2: 2, 3: 6, 4: 9, 5: 15, 6: 22}
