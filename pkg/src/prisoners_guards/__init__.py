"""Prisoners and Guards: a two-player packing game on the king's graph.

Players alternately raise the prisoner count on an n x n board by one,
either by turning a guard into a prisoner or by trading one prisoner for
two, while every prisoner must keep at least as many guard neighbors as
prisoner neighbors.  This package computes exact maximum configurations,
verifies the deficiency-matrix identity and upper bounds, and plays the
game (library, CLI, and HTTP/WebSocket server).
"""

from .board import (
    Board,
    CellClass,
    ClassCounts,
    InvalidBoardError,
    MAX_SIZE,
    ParseError,
    Square,
    Transform,
    UnsupportedSizeError,
    board_from_json,
    board_to_json,
    canonicalize,
    class_counts,
    classify,
    is_canonical,
    is_valid,
    neighbors,
    parse_board,
    prisoner_neighbor_count,
    serialize_board,
    transform_board,
)
from .bounds import (
    DeficiencyBoundsReport,
    DeficiencyMatrix,
    check_deficiency_lower_bounds,
    crude_upper_bound,
    deficiency,
    expectation,
    identity_residual,
    improved_upper_bound,
)
from .game import (
    Color,
    ColoredBoard,
    GameOverError,
    GameState,
    GameStatus,
    GreedyPolicy,
    MinimaxPolicy,
    Outcome,
    RandomPolicy,
    Score,
    ai_choose,
    colored_legal_moves,
    format_seat,
    minimax_value,
    new_game,
    parse_seat,
    parse_transcript,
    play,
    replay_transcript,
    score,
    self_play,
    transcript_lines,
)
from .moves import (
    IllegalMoveError,
    Move,
    PlaceMove,
    SwapMove,
    apply_move,
    has_legal_move,
    is_maximal,
    legal_moves,
    move_from_json,
    move_to_json,
)
from .solver import (
    CornerLemmaReport,
    EnumerationFilter,
    SearchStats,
    SolveResult,
    count_valid,
    enumerate_valid,
    max_prisoners,
    maximal_class_census,
    random_boards,
    sample_valid,
    verify_corner_lemmas,
)

__version__ = "0.1.0"
