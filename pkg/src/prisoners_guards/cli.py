"""Command-line front end.

Subcommands: solve (exact maximum with a JSON result cache), enumerate
(stream valid boards), verify (identity and deficiency-bound suites with
seeded sampling), bounds (closed-form upper bounds and the density
diagnostic), play (AI-vs-AI game to completion), replay (validate a
transcript), serve (HTTP/WebSocket server).

Exit codes: 0 success, 1 verification failure or illegal input, 2 usage
error.  JSON mode prints exactly one JSON document on stdout.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import bounds as bounds_mod
from . import game as game_mod
from . import solver as solver_mod
from .board import (
    Board,
    ParseError,
    UnsupportedSizeError,
    board_from_json,
    board_to_json,
    serialize_board,
)
from .moves import move_to_json

CACHE_ENV = "PRISONERS_GUARDS_CACHE"


def _default_cache_dir() -> str:
    return os.environ.get(CACHE_ENV) or str(Path.home() / ".cache" / "prisoners-guards")


format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
)


@click.group()
def main():
    """Analyze and play the Prisoners and Guards packing game."""


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--force", is_flag=True, help="Recompute even if a cached result exists.")
@click.option("--budget", type=float, default=None, help="Time budget in seconds (needed for n > 6).")
@click.option("--cache-dir", default=None, help=f"Cache directory (or ${CACHE_ENV}).")
@format_option
def solve(n, force, budget, cache_dir, fmt):
    """Exact maximum prisoner count and the maximum boards up to symmetry."""
    cache_root = Path(cache_dir or _default_cache_dir())
    cache_file = cache_root / f"solve_n{n}.json"
    doc = None
    if not force and cache_file.exists():
        try:
            doc = json.loads(cache_file.read_text())
        except (OSError, json.JSONDecodeError):
            doc = None
    if doc is None:
        try:
            result = solver_mod.max_prisoners(n, budget=budget)
        except UnsupportedSizeError as exc:
            raise click.ClickException(str(exc))
        doc = {
            "n": n,
            "p_max": result.p_max,
            "certified": result.certified,
            "representatives": [board_to_json(b) for b in result.representatives],
            "stats": {
                "nodes_expanded": result.stats.nodes_expanded,
                "pruned_by_bound": result.stats.pruned_by_bound,
                "elapsed_seconds": result.stats.elapsed_seconds,
            },
        }
        try:
            cache_root.mkdir(parents=True, exist_ok=True)
            cache_file.write_text(json.dumps(doc, indent=2) + "\n")
        except OSError:
            pass  # caching is best-effort
    if fmt == "json":
        click.echo(json.dumps(doc))
        return
    click.echo(f"P({doc['n']}) = {doc['p_max']}")
    if not doc["certified"]:
        click.echo("(not certified: best lower bound within the budget)")
    for rep in doc["representatives"]:
        click.echo("")
        click.echo(serialize_board(board_from_json(rep)), nl=False)


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--maximal", is_flag=True, help="Only boards with no legal move.")
@click.option("--prisoners", type=int, default=None, help="Only boards with exactly this many prisoners.")
@click.option("--canonical", is_flag=True, help="One representative per symmetry class.")
@format_option
def enumerate(n, maximal, prisoners, canonical, fmt):
    """Stream every valid board of size n (n <= 5)."""
    filt = solver_mod.EnumerationFilter(
        require_maximal=maximal, exact_prisoners=prisoners, canonical_only=canonical
    )
    try:
        if fmt == "json":
            boards = [board_to_json(b) for b in solver_mod.enumerate_valid(n, filt)]
            click.echo(json.dumps({"n": n, "count": len(boards), "boards": boards}))
            return
        count = 0
        for b in solver_mod.enumerate_valid(n, filt):
            count += 1
            click.echo(serialize_board(b))
        click.echo(f"count = {count}")
    except (UnsupportedSizeError, ValueError) as exc:
        raise click.ClickException(str(exc))


def _verify_lines(n: int, samples: int, seed: int):
    """Yield (label, ok) pairs for every check that applies at size n."""
    from .board import CellClass, classify, prisoner_neighbor_count
    from .bounds import check_deficiency_lower_bounds, deficiency, identity_residual

    if not 2 <= n <= 8:
        raise click.ClickException("verify supports 2 <= n <= 8")

    sample = solver_mod.random_boards(n, samples, seed)
    ok = all(identity_residual(b) == 0 for b in sample)
    yield f"IDENTITY n={n} boards={len(sample)} residual=0", ok

    coeff = {"corner": 2, "edge": 3, "interior": 4}
    const = {("corner", 1): 3, ("corner", 0): 2, ("edge", 1): 5, ("edge", 0): 4,
             ("interior", 1): 8, ("interior", 0): 6}

    def eq1_holds(b: Board) -> bool:
        # coeff*x + x* == class constant - delta on every square
        d = deficiency(b)
        for s in b.squares():
            cls = classify(s, n).value
            x = 1 if b.is_prisoner(s) else 0
            lhs = coeff[cls] * x + prisoner_neighbor_count(b, s)
            if lhs != const[(cls, x)] - d.delta[s.row][s.col]:
                return False
        return True

    yield f"EQ1 n={n} boards={len(sample)}", all(eq1_holds(b) for b in sample)

    if n <= 6:
        if n <= 4:
            valid = list(solver_mod.enumerate_valid(n))
            mode = "exhaustive"
        else:
            valid = solver_mod.sample_valid(n, samples, seed)
            mode = "sampled"
        reports = [check_deficiency_lower_bounds(b) for b in valid]
        yield f"LEMMA41 n={n} boards={len(valid)} mode={mode}", all(r.holds_class_weighted for r in reports)
        yield f"LEMMA44 n={n} boards={len(valid)} mode={mode}", all(r.holds_guard for r in reports)

        def delta_ranges(b: Board) -> bool:
            d = deficiency(b)
            for s in b.squares():
                v = d.delta[s.row][s.col]
                if b.is_prisoner(s):
                    if v < 0:
                        return False
                elif v < (-2 if classify(s, n) is CellClass.INTERIOR else -1):
                    return False
            return True

        yield f"DELTARANGE n={n} boards={len(valid)} mode={mode}", all(delta_ranges(b) for b in valid)
        corner = solver_mod.verify_corner_lemmas(n, samples=samples, seed=seed)
        yield f"CORNER n={n} mode={corner.mode} counterexamples={corner.counterexample_count}", corner.ok
    else:
        yield f"LEMMA41 n={n} SKIP (valid-board suites cover 2..6)", True


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
def verify(n, samples, seed, fmt):
    """Run the identity and deficiency-bound suites; exit 1 on any failure."""
    results = []
    click_echo = (lambda *_: None) if fmt == "json" else click.echo
    click_echo(f"SEED {seed}")
    for label, ok in _verify_lines(n, samples, seed):
        results.append({"check": label, "ok": ok})
        click_echo(f"{label} {'OK' if ok else 'FAIL'}")
    if fmt == "json":
        click.echo(json.dumps({"n": n, "seed": seed, "samples": samples, "checks": results}))
    if not all(r["ok"] for r in results):
        sys.exit(1)


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--budget", type=float, default=None, help="Budget for the exact solve when n > 6.")
@format_option
def bounds(n, budget, fmt):
    """Closed-form upper bounds and the prisoner-density diagnostic."""
    try:
        crude = bounds_mod.crude_upper_bound(n)
        improved = bounds_mod.improved_upper_bound(n)
    except UnsupportedSizeError as exc:
        raise click.ClickException(str(exc))
    doc = {"n": n, "crude_upper_bound": crude, "improved_upper_bound": improved}
    if n == 1:
        doc["note"] = "degenerate size: the class census behind the bounds assumes n >= 2"
    p_max = None
    if n <= solver_mod.EXACT_SOLVE_LIMIT or budget is not None:
        result = solver_mod.max_prisoners(n, budget=budget)
        if result.certified:
            p_max = result.p_max
            doc["p_max"] = p_max
            doc["density"] = p_max / (n * n)
    if fmt == "json":
        click.echo(json.dumps(doc))
        return
    click.echo(f"n = {n}")
    click.echo(f"crude_upper_bound = {crude}")
    click.echo(f"improved_upper_bound = {improved}")
    if "note" in doc:
        click.echo(f"note: {doc['note']}")
    if p_max is not None:
        click.echo(f"P({n}) = {p_max}")
        click.echo(f"density P/n^2 = {p_max / (n * n):.4f}")
    else:
        click.echo(f"P({n}) not computed (give --budget to attempt an exact solve)")


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--red", required=True, help="Seat spec, e.g. ai:greedy or ai:random:7.")
@click.option("--blue", required=True, help="Seat spec for blue.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for ai:random seats given without one.")
@format_option
def play(n, red, blue, seed, fmt):
    """Run an AI-vs-AI game to completion and print the transcript and score."""
    seats = {}
    for name, spec in (("red", red), ("blue", blue)):
        try:
            policy = game_mod.parse_seat(spec)
        except ValueError as exc:
            raise click.ClickException(str(exc))
        if policy is None:
            raise click.ClickException(f"{name} seat must be an AI (interactive play lives in the browser UI)")
        if isinstance(policy, game_mod.RandomPolicy) and spec.strip().lower() == "ai:random":
            policy = game_mod.RandomPolicy(seed=seed)  # --seed fills an omitted seed
        seats[name] = policy
    try:
        state = game_mod.self_play(n, seats["red"], seats["blue"])
    except UnsupportedSizeError as exc:
        raise click.ClickException(str(exc))
    sc = game_mod.score(state)
    if fmt == "json":
        click.echo(
            json.dumps(
                {
                    "n": n,
                    "moves": [
                        {"player": color.value, "move": move_to_json(m)} for color, m in state.history
                    ],
                    "score": {"red": sc.red, "blue": sc.blue, "outcome": sc.outcome.value},
                    "board": {"n": n, "rows": state.board.rows()},
                }
            )
        )
        return
    for line in game_mod.transcript_lines(state):
        click.echo(line)
    click.echo(f"score red={sc.red} blue={sc.blue} outcome={sc.outcome.value}")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@format_option
def replay(file, fmt):
    """Validate a transcript file by replaying it from the empty board."""
    text = Path(file).read_text()
    try:
        state = game_mod.replay_transcript(text)
    except (ParseError, game_mod.IllegalMoveError, UnsupportedSizeError) as exc:
        raise click.ClickException(f"invalid transcript: {exc}")
    sc = game_mod.score(state)
    doc = {
        "n": state.board.n,
        "moves": len(state.history),
        "status": state.status.value,
        "score": {"red": sc.red, "blue": sc.blue, "outcome": sc.outcome.value},
    }
    if fmt == "json":
        click.echo(json.dumps(doc))
    else:
        click.echo(f"replayed {doc['moves']} moves, status={doc['status']}")
        click.echo(f"score red={sc.red} blue={sc.blue} outcome={sc.outcome.value}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static", "static_dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Directory of browser UI assets to serve at /.")
def serve(port, host, static_dir):
    """Start the game server (HTTP + WebSocket)."""
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(static_dir=static_dir), host=host, port=port)


if __name__ == "__main__":
    main()
