import pytest

from prisoners_guards import (
    Board,
    Color,
    ColoredBoard,
    GameOverError,
    GameStatus,
    GreedyPolicy,
    IllegalMoveError,
    MinimaxPolicy,
    Outcome,
    PlaceMove,
    RandomPolicy,
    Square,
    SwapMove,
    UnsupportedSizeError,
    ai_choose,
    apply_move,
    colored_legal_moves,
    format_seat,
    is_maximal,
    is_valid,
    legal_moves,
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

from fixtures import KNOWN_P, MAX_3X3


def play_all(n, moves):
    s = new_game(n)
    for m in moves:
        s = play(s, m)
    return s


def test_new_game():
    s = new_game(3)
    assert s.board.board().guard_count() == 9
    assert s.to_move is Color.RED
    assert s.status is GameStatus.ONGOING
    assert s.history == ()


def test_new_game_1x1_is_ongoing():
    assert new_game(1).status is GameStatus.ONGOING


def test_new_game_rejects_bad_sizes():
    with pytest.raises(UnsupportedSizeError):
        new_game(0)
    with pytest.raises(UnsupportedSizeError):
        new_game(17)


def test_single_square_game():
    s = play(new_game(1), PlaceMove(Square(0, 0)))
    assert s.status is GameStatus.FINISHED
    sc = score(s)
    assert (sc.red, sc.blue, sc.outcome) == (1, 0, Outcome.RED_WINS)
    with pytest.raises(GameOverError):
        play(s, PlaceMove(Square(0, 0)))
    with pytest.raises(GameOverError):
        colored_legal_moves(s)
    with pytest.raises(GameOverError):
        ai_choose(s, GreedyPolicy())


def test_colored_legal_moves_match_uncolored():
    s = play_all(4, [PlaceMove(Square(0, 0)), PlaceMove(Square(3, 3))])
    assert colored_legal_moves(s) == legal_moves(s.board.board())


def test_zero_prisoner_states_offer_rule_one_only():
    assert all(isinstance(m, PlaceMove) for m in colored_legal_moves(new_game(4)))


def test_swap_may_remove_either_color():
    s = play_all(3, [PlaceMove(Square(1, 1))])  # red prisoner in the center
    s = play(s, SwapMove(Square(1, 1), Square(0, 0), Square(2, 2)))  # blue removes it
    assert s.board.count(Color.BLUE) == 2
    assert s.board.count(Color.RED) == 0
    assert s.board.color_at(Square(1, 1)) is None


def test_play_rejects_occupancy_conflicts_with_reason():
    s = play_all(2, [PlaceMove(Square(0, 0))])
    with pytest.raises(IllegalMoveError) as err:
        play(s, PlaceMove(Square(0, 0)))
    assert err.value.reason == "occupancy"
    with pytest.raises(IllegalMoveError) as err:
        play(s, SwapMove(Square(0, 1), Square(1, 0), Square(1, 1)))
    assert err.value.reason == "occupancy"


def test_play_rejects_invalid_results_with_reason():
    s = play_all(3, [PlaceMove(Square(0, 0)), PlaceMove(Square(1, 0))])
    with pytest.raises(IllegalMoveError) as err:
        # the corner prisoner would see two prisoners but only one guard
        play(s, PlaceMove(Square(0, 1)))
    assert err.value.reason == "invalid_result"


def test_history_length_tracks_prisoner_count():
    s = new_game(3)
    for _ in range(4):
        s = play(s, ai_choose(s, RandomPolicy(9)))
        assert len(s.history) == s.board.board().prisoner_count()


def test_score_examples():
    assert score(new_game(4)) == type(score(new_game(4)))(0, 0, Outcome.TIE)
    s = play_all(2, [PlaceMove(Square(0, 0)), PlaceMove(Square(1, 1))])
    sc = score(s)
    assert (sc.red, sc.blue, sc.outcome) == (1, 1, Outcome.TIE)


def test_color_erasure_commutes_with_moves():
    s = new_game(4)
    for _ in range(5):
        m = ai_choose(s, RandomPolicy(31))
        erased_then_moved = apply_move(s.board.board(), m)
        s = play(s, m)
        assert s.board.board() == erased_then_moved


def test_finished_iff_maximal():
    s = new_game(3)
    while s.status is GameStatus.ONGOING:
        assert not is_maximal(s.board.board())
        s = play(s, ai_choose(s, RandomPolicy(77)))
    assert is_maximal(s.board.board())
    assert s.board.board().prisoner_count() == KNOWN_P[3]


# --- AI policies -----------------------------------------------------------


def test_random_policy_is_pure():
    s = play_all(3, [PlaceMove(Square(1, 1))])
    picks = {ai_choose(s, RandomPolicy(4)) for _ in range(10)}
    assert len(picks) == 1
    assert ai_choose(s, RandomPolicy(4)) in colored_legal_moves(s)


def test_random_policy_seed_changes_games():
    a = self_play(4, RandomPolicy(1), RandomPolicy(1))
    b = self_play(4, RandomPolicy(2), RandomPolicy(2))
    assert a.history != b.history


def test_self_play_transcripts_reproducible():
    a = self_play(4, RandomPolicy(11), GreedyPolicy())
    b = self_play(4, RandomPolicy(11), GreedyPolicy())
    assert a.history == b.history
    assert transcript_lines(a) == transcript_lines(b)


def test_greedy_prefers_removing_opponent_prisoners():
    # red center prisoner; a swap removing it swings blue's differential by
    # +3 (to +2), while any placement only swings it by +1 (to 0)
    s = play_all(3, [PlaceMove(Square(1, 1))])
    before = s.board.count(Color.BLUE) - s.board.count(Color.RED)
    m = ai_choose(s, GreedyPolicy())
    assert isinstance(m, SwapMove)
    assert m.remove == Square(1, 1)
    after_state = play(s, m)
    after = after_state.board.count(Color.BLUE) - after_state.board.count(Color.RED)
    assert after == 2
    assert after - before == 3


def test_minimax_on_forced_move():
    s = new_game(1)
    assert ai_choose(s, MinimaxPolicy(depth=9)) == PlaceMove(Square(0, 0))


def oracle_negamax(state, memo):
    """Independent exhaustive solver: plain negamax, no pruning, no depth
    limit, memoized on the colored position."""
    if state.status is GameStatus.FINISHED:
        mine = state.board.count(state.to_move)
        theirs = state.board.count(state.to_move.other)
        w = state.board.n ** 2 + 1
        return w if mine > theirs else -w if mine < theirs else 0
    key = (state.board.red, state.board.blue, state.to_move)
    if key in memo:
        return memo[key]
    value = max(-oracle_negamax(play(state, m), memo) for m in colored_legal_moves(state))
    memo[key] = value
    return value


def test_minimax_matches_exhaustive_oracle_3x3():
    start = new_game(3)
    oracle_value = oracle_negamax(start, {})
    assert minimax_value(start, 9) == oracle_value
    # recorded derived artifact: perfect play on 3x3 is a tie
    assert oracle_value == 0


def test_minimax_matches_exhaustive_oracle_2x2():
    start = new_game(2)
    value = oracle_negamax(start, {})
    assert minimax_value(start, 6) == value
    assert value == -5  # the responder converts the first prisoner and wins


def test_minimax_matches_oracle_from_midgame():
    s = play_all(3, [PlaceMove(Square(0, 0)), PlaceMove(Square(2, 2))])
    assert minimax_value(s, 9) == oracle_negamax(s, {})


def test_minimax_depth_one_equals_greedy_choice():
    s = play_all(3, [PlaceMove(Square(1, 1))])
    assert ai_choose(s, MinimaxPolicy(depth=1)) == ai_choose(s, GreedyPolicy())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_self_play_terminates_within_maximum(n):
    for seed in range(3):
        s = self_play(n, RandomPolicy(seed), RandomPolicy(seed + 100))
        assert s.status is GameStatus.FINISHED
        assert len(s.history) <= KNOWN_P[n]
        assert is_maximal(s.board.board())


def test_every_intermediate_board_valid():
    s = new_game(4)
    while s.status is GameStatus.ONGOING:
        s = play(s, ai_choose(s, RandomPolicy(5)))
        assert is_valid(s.board.board())


# --- seats and transcripts ---------------------------------------------------


def test_parse_seat_round_trip():
    for spec, parsed in [
        ("human", None),
        ("ai:greedy", GreedyPolicy()),
        ("ai:random:7", RandomPolicy(7)),
        ("ai:minimax:2", MinimaxPolicy(2)),
    ]:
        assert parse_seat(spec) == parsed
        assert parse_seat(format_seat(parsed)) == parsed
    with pytest.raises(ValueError):
        parse_seat("ai:alphabeta")
    with pytest.raises(ValueError):
        parse_seat("ai:minimax:x")


def test_transcript_round_trip_and_replay():
    end = self_play(3, RandomPolicy(1), GreedyPolicy())
    text = "\n".join(transcript_lines(end)) + "\n"
    n, entries = parse_transcript(text)
    assert n == 3
    assert len(entries) == len(end.history)
    replayed = replay_transcript(text)
    assert replayed.board == end.board
    assert replayed.status is GameStatus.FINISHED


def test_replay_rejects_wrong_turn_order():
    from prisoners_guards import ParseError

    good = "\n".join(transcript_lines(self_play(2, RandomPolicy(0), RandomPolicy(0))))
    lines = good.splitlines()
    swapped = "\n".join([lines[0], lines[2], lines[1]])
    with pytest.raises((ParseError, IllegalMoveError)):
        replay_transcript(swapped)


def test_colored_board_rows_round_trip():
    s = self_play(3, RandomPolicy(4), RandomPolicy(5))
    rows = s.board.rows()
    rebuilt = ColoredBoard.from_rows(rows)
    assert rebuilt == s.board
    assert set("".join(rows)) <= set(".RB")
