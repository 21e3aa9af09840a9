"""Game session service: HTTP endpoints plus a WebSocket state channel.

Sessions live in memory and are evicted after an idle TTL; durable output is
the transcript download.  All rule checking goes through game.play - the
server never second-guesses the game module, it only enforces session
bookkeeping (who sits where, whose turn it is).  Every state change is pushed
to all WebSocket subscribers as a state frame; the same frame shape is
returned by the HTTP endpoints.

Wire shapes:
  state frame  {"type": "state", "id", "board": {"n", "rows"}, "toMove",
                "status", "score": {"red", "blue", "outcome"}, "seats",
                "moveCount"}   (rows use '.', 'R', 'B')
  error        {"type": "error", "code", "detail"} on the socket;
               {"code", "detail"} as HTTP error bodies
  move submit  {"seat": "R"|"B", "move": <move JSON>} via
               POST /sessions/{id}/moves or {"type": "move", ...} on the socket
"""

from __future__ import annotations

import asyncio
import secrets
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .board import MAX_SIZE, Square
from .game import (
    Color,
    GameOverError,
    GameState,
    GameStatus,
    IllegalMoveError,
    Policy,
    PlaceMove,
    SwapMove,
    ai_choose,
    colored_legal_moves,
    format_seat,
    move_from_json,
    new_game,
    parse_seat,
    play,
    score,
    transcript_lines,
)

DEFAULT_TTL_SECONDS = 3600.0

HINT_STAGES = ("rule_i", "rule_ii_remove", "rule_ii_add")


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str, **extra):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail
        self.extra = extra

    def body(self) -> dict:
        return {"code": self.code, "detail": self.detail, **self.extra}


@dataclass
class Session:
    id: str
    state: GameState
    seats: dict[Color, Policy | None]
    created: float
    updated: float
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    subscribers: list[asyncio.Queue] = field(default_factory=list)


class SessionRegistry:
    def __init__(self, ttl: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}

    def sweep(self, now: float | None = None) -> None:
        now = time.monotonic() if now is None else now
        stale = [sid for sid, s in self._sessions.items() if now - s.updated > self.ttl]
        for sid in stale:
            del self._sessions[sid]

    def create(self, state: GameState, seats: dict[Color, Policy | None]) -> Session:
        self.sweep()
        sid = secrets.token_urlsafe(8)
        while sid in self._sessions:
            sid = secrets.token_urlsafe(8)
        now = time.monotonic()
        session = Session(id=sid, state=state, seats=seats, created=now, updated=now)
        self._sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        self.sweep()
        session = self._sessions.get(sid)
        if session is None:
            raise ApiError(404, "not_found", f"no session {sid!r}")
        return session

    def __len__(self) -> int:
        return len(self._sessions)


def state_frame(session: Session) -> dict:
    st = session.state
    sc = score(st)
    return {
        "type": "state",
        "id": session.id,
        "board": {"n": st.board.n, "rows": st.board.rows()},
        "toMove": st.to_move.value,
        "status": st.status.value,
        "score": {"red": sc.red, "blue": sc.blue, "outcome": sc.outcome.value},
        "seats": {"red": format_seat(session.seats[Color.RED]), "blue": format_seat(session.seats[Color.BLUE])},
        "moveCount": len(st.history),
    }


def _broadcast(session: Session) -> None:
    frame = state_frame(session)
    for q in session.subscribers:
        q.put_nowait(frame)


def _advance_ai(session: Session) -> None:
    """Let AI seats move until a human is on turn or the game ends, pushing a
    frame after every move."""
    while session.state.status is GameStatus.ONGOING:
        policy = session.seats[session.state.to_move]
        if policy is None:
            break
        session.state = play(session.state, ai_choose(session.state, policy))
        session.updated = time.monotonic()
        _broadcast(session)


def _parse_square_param(raw: str, what: str) -> Square:
    try:
        r, c = raw.split(",")
        return Square(int(r), int(c))
    except ValueError:
        raise ApiError(422, "request_error", f"{what} must look like 'row,col'", field=what) from None


def _apply_submission(session: Session, body: dict) -> None:
    """Shared move-submission path for HTTP and the socket."""
    try:
        seat_color = Color(body.get("seat"))
    except ValueError:
        raise ApiError(422, "request_error", "seat must be 'R' or 'B'", field="seat") from None
    if "move" not in body:
        raise ApiError(422, "request_error", "missing move", field="move")
    try:
        move = move_from_json(body["move"])
    except IllegalMoveError as exc:
        raise ApiError(400, "illegal_move", str(exc), reason=exc.reason) from None
    except ValueError as exc:
        raise ApiError(422, "request_error", str(exc), field="move") from None

    st = session.state
    if st.status is GameStatus.FINISHED:
        raise ApiError(409, "game_over", "the game is finished")
    if seat_color is not st.to_move:
        raise ApiError(409, "turn_error", f"it is {st.to_move.value}'s turn")
    if session.seats[seat_color] is not None:
        raise ApiError(409, "turn_error", f"seat {seat_color.value} is played by the AI")
    try:
        session.state = play(st, move)
    except IllegalMoveError as exc:
        raise ApiError(400, "illegal_move", str(exc), reason=exc.reason) from None
    session.updated = time.monotonic()
    _broadcast(session)
    _advance_ai(session)


def _hints(session: Session, stage: str, remove: Square | None, add1: Square | None) -> list[list[int]]:
    st = session.state
    if st.status is GameStatus.FINISHED:
        return []
    squares: set[Square] = set()
    moves = colored_legal_moves(st)
    if stage == "rule_i":
        squares = {m.place for m in moves if isinstance(m, PlaceMove)}
    elif stage == "rule_ii_remove":
        squares = {m.remove for m in moves if isinstance(m, SwapMove)}
    elif stage == "rule_ii_add":
        if remove is None:
            raise ApiError(422, "request_error", "stage rule_ii_add needs remove=row,col", field="remove")
        for m in moves:
            if not isinstance(m, SwapMove) or m.remove != remove:
                continue
            if add1 is None:
                squares.update((m.add1, m.add2))
            elif add1 == m.add1:
                squares.add(m.add2)
            elif add1 == m.add2:
                squares.add(m.add1)
    else:
        raise ApiError(422, "request_error", f"stage must be one of {', '.join(HINT_STAGES)}", field="stage")
    return [[s.row, s.col] for s in sorted(squares)]


def create_app(*, session_ttl: float = DEFAULT_TTL_SECONDS, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="prisoners-guards")
    registry = SessionRegistry(ttl=session_ttl)
    app.state.registry = registry

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.post("/sessions")
    async def create_session(body: dict):
        n = body.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_SIZE:
            raise ApiError(422, "request_error", f"n must be an integer in 1..{MAX_SIZE}", field="n")
        seats = {}
        for color, key in ((Color.RED, "red"), (Color.BLUE, "blue")):
            try:
                seats[color] = parse_seat(str(body.get(key, "")))
            except ValueError as exc:
                raise ApiError(422, "request_error", str(exc), field=key) from None
        session = registry.create(new_game(n), seats)
        async with session.lock:
            _advance_ai(session)
        return {"id": session.id, "state": state_frame(session)}

    @app.get("/sessions/{sid}")
    async def get_session(sid: str):
        return state_frame(registry.get(sid))

    @app.post("/sessions/{sid}/moves")
    async def submit_move(sid: str, body: dict):
        session = registry.get(sid)
        async with session.lock:
            _apply_submission(session, body)
            return state_frame(session)

    @app.get("/sessions/{sid}/hints")
    async def hints(sid: str, stage: str, remove: str | None = None, add1: str | None = None):
        session = registry.get(sid)
        async with session.lock:
            return _hints(
                session,
                stage.strip().lower(),
                _parse_square_param(remove, "remove") if remove else None,
                _parse_square_param(add1, "add1") if add1 else None,
            )

    @app.get("/sessions/{sid}/transcript")
    async def transcript(sid: str):
        session = registry.get(sid)
        return PlainTextResponse("\n".join(transcript_lines(session.state)) + "\n")

    @app.websocket("/sessions/{sid}/ws")
    async def session_socket(ws: WebSocket, sid: str):
        await ws.accept()
        try:
            session = registry.get(sid)
        except ApiError as exc:
            await ws.send_json({"type": "error", **exc.body()})
            await ws.close()
            return
        queue: asyncio.Queue = asyncio.Queue()
        session.subscribers.append(queue)
        await ws.send_json(state_frame(session))

        async def pump():
            while True:
                await ws.send_json(await queue.get())

        sender = asyncio.create_task(pump())
        try:
            while True:
                try:
                    msg = await ws.receive_json()
                except ValueError:
                    await ws.send_json({"type": "error", "code": "request_error", "detail": "frames must be JSON"})
                    continue
                if not isinstance(msg, dict) or msg.get("type") != "move":
                    await ws.send_json({"type": "error", "code": "request_error", "detail": "expected a move message"})
                    continue
                try:
                    async with session.lock:
                        _apply_submission(session, msg)
                except ApiError as exc:
                    await ws.send_json({"type": "error", **exc.body()})
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            if queue in session.subscribers:
                session.subscribers.remove(queue)

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app


app = create_app()
