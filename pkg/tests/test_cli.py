import json

import pytest
from click.testing import CliRunner

from prisoners_guards.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def run(runner, *args, **kwargs):
    result = runner.invoke(main, list(args), **kwargs)
    return result


def test_solve_text_output(runner, tmp_path):
    result = run(runner, "solve", "--n", "3", "--cache-dir", str(tmp_path))
    assert result.exit_code == 0
    assert result.output.startswith("P(3) = 6\n")
    assert "#.#" in result.output


def test_solve_uses_and_refreshes_cache(runner, tmp_path):
    first = run(runner, "solve", "--n", "4", "--cache-dir", str(tmp_path), "--format", "json")
    doc = json.loads(first.output)
    assert doc["p_max"] == 9 and doc["certified"]
    assert len(doc["representatives"]) == 3
    cache_file = tmp_path / "solve_n4.json"
    assert cache_file.exists()
    # poison the cache to prove it is being read, then bypass it with --force
    poisoned = dict(doc, p_max=99)
    cache_file.write_text(json.dumps(poisoned))
    cached = json.loads(run(runner, "solve", "--n", "4", "--cache-dir", str(tmp_path), "--format", "json").output)
    assert cached["p_max"] == 99
    forced = json.loads(
        run(runner, "solve", "--n", "4", "--cache-dir", str(tmp_path), "--force", "--format", "json").output
    )
    assert forced["p_max"] == 9


def test_solve_cache_env_var(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("PRISONERS_GUARDS_CACHE", str(tmp_path))
    result = run(runner, "solve", "--n", "2")
    assert result.exit_code == 0
    assert (tmp_path / "solve_n2.json").exists()


def test_enumerate_counts_eleven(runner):
    result = run(runner, "enumerate", "--n", "2")
    assert result.exit_code == 0
    assert result.output.strip().endswith("count = 11")


def test_enumerate_json(runner):
    result = run(runner, "enumerate", "--n", "3", "--maximal", "--canonical", "--format", "json")
    doc = json.loads(result.output)
    assert doc["count"] == 1
    assert doc["boards"][0]["rows"] == ["#.#", "#.#", "#.#"]


def test_enumerate_rejects_big_n(runner):
    result = run(runner, "enumerate", "--n", "6")
    assert result.exit_code == 1


def test_bounds_output(runner):
    result = run(runner, "bounds", "--n", "6")
    assert result.exit_code == 0
    assert "crude_upper_bound = 26" in result.output
    assert "improved_upper_bound = 25" in result.output
    assert "P(6) = 22" in result.output
    assert "density" in result.output


def test_bounds_degenerate_n1(runner):
    result = run(runner, "bounds", "--n", "1")
    assert result.exit_code == 0
    assert "degenerate" in result.output


def test_bounds_large_n_without_budget(runner):
    result = run(runner, "bounds", "--n", "12")
    assert result.exit_code == 0
    assert "P(12) not computed" in result.output


def test_verify_small(runner):
    result = run(runner, "verify", "--n", "2", "--samples", "300")
    assert result.exit_code == 0, result.output
    assert "SEED 0" in result.output
    assert "IDENTITY n=2 boards=300 residual=0 OK" in result.output
    assert "EQ1 n=2 boards=300 OK" in result.output
    assert "LEMMA41 n=2 boards=11 mode=exhaustive OK" in result.output
    assert "LEMMA44 n=2 boards=11 mode=exhaustive OK" in result.output
    assert "DELTARANGE n=2" in result.output
    assert "CORNER n=2 mode=exhaustive counterexamples=0 OK" in result.output


def test_verify_sampled_size(runner):
    result = run(runner, "verify", "--n", "5", "--samples", "200", "--seed", "1")
    assert result.exit_code == 0, result.output
    assert "SEED 1" in result.output
    assert "mode=sampled" in result.output


def test_verify_json_mode_single_document(runner):
    result = run(runner, "verify", "--n", "3", "--samples", "100", "--format", "json")
    doc = json.loads(result.output)
    assert doc["n"] == 3
    assert all(check["ok"] for check in doc["checks"])


def test_verify_out_of_range(runner):
    assert run(runner, "verify", "--n", "1").exit_code == 1
    assert run(runner, "verify", "--n", "9").exit_code == 1


def test_play_deterministic_transcripts(runner):
    args = ["play", "--n", "4", "--red", "ai:random:5", "--blue", "ai:greedy"]
    first = run(runner, *args)
    second = run(runner, *args)
    assert first.exit_code == 0
    assert first.output == second.output
    assert first.output.splitlines()[0] == '{"n": 4}'
    assert "score red=" in first.output


def test_play_seed_option_fills_random_seat(runner):
    a = run(runner, "play", "--n", "3", "--red", "ai:random", "--blue", "ai:random", "--seed", "9")
    b = run(runner, "play", "--n", "3", "--red", "ai:random:9", "--blue", "ai:random:9")
    assert a.output == b.output


def test_play_rejects_human_seats(runner):
    result = run(runner, "play", "--n", "3", "--red", "human", "--blue", "ai:greedy")
    assert result.exit_code == 1


def test_replay_round_trip(runner, tmp_path):
    game = run(runner, "play", "--n", "3", "--red", "ai:random:2", "--blue", "ai:random:3")
    transcript = "\n".join(game.output.splitlines()[:-1]) + "\n"  # drop the score line
    path = tmp_path / "game.jsonl"
    path.write_text(transcript)
    result = run(runner, "replay", str(path))
    assert result.exit_code == 0
    assert "status=finished" in result.output
    # score line of play matches the replay's score
    assert game.output.splitlines()[-1].split("score ")[1] in result.output


def test_replay_rejects_tampered_transcript(runner, tmp_path):
    game = run(runner, "play", "--n", "3", "--red", "ai:random:2", "--blue", "ai:random:3")
    lines = game.output.splitlines()[:-1]
    lines[1], lines[2] = lines[2], lines[1]  # swap the turn order
    path = tmp_path / "bad.jsonl"
    path.write_text("\n".join(lines) + "\n")
    result = run(runner, "replay", str(path))
    assert result.exit_code == 1
    assert "invalid transcript" in result.output


def test_usage_errors_exit_2(runner):
    assert run(runner, "solve").exit_code == 2
    assert run(runner, "frobnicate").exit_code == 2
