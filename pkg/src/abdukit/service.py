"""Session service: live dialogues over HTTP with transcript persistence.

Endpoints (JSON in, JSON out):

    POST /sessions                    {config payload}  -> {id, presentation}
    GET  /sessions/{id}               -> state summary
    GET  /sessions/{id}/presentation  -> {candidates: [..], terminal}
    POST /sessions/{id}/feedback      {turn, items: [{propertyKey, polarity}]}
                                      -> {accepted, next | terminal}
    GET  /sessions/{id}/transcript    -> transcript file payload

Sessions persist as append-only JSONL files keyed by session id (first
line holds the config, each following line one turn); a restarted process
reloads them lazily and accepts the same next moves.  The service never
enforces the towards discipline: a configured target only powers the
convergence verdict shown at the end (the simulated user in the CLI is the
one bound by it).  Double submissions are rejected via the turn counter:
each feedback names the move index it answers, so a replayed request gets
a conflict instead of a second application.
"""

from __future__ import annotations

import json
import os
import re
import threading
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from .dialogue import (
    DialogueError,
    DialogueState,
    Feedback,
    FeedbackSet,
    Presentation,
    ProtocolConfig,
    Transcript,
    check_convergence,
    is_maximal,
    next_presentation,
    validate_feedback,
    walkthrough_presenter,
)
from .files import (
    FileFormatError,
    move_from_json,
    move_to_json,
    property_to_json,
    item_to_json,
    session_config,
)
from .hypotheses import PoolError


class ServiceError(Exception):
    def __init__(self, status: int, message: str, extra: Optional[dict] = None):
        super().__init__(message)
        self.status = status
        self.payload = {"error": message, **(extra or {})}


@dataclass
class Session:
    id: str
    cfg: ProtocolConfig
    source: dict
    state: DialogueState = field(default_factory=DialogueState)

    @property
    def turn(self) -> int:
        return len(self.state.moves)

    def pointed_keys(self) -> set[str]:
        state = self.state
        keys = set()
        for move in state.moves:
            if isinstance(move, FeedbackSet):
                keys.update(fb.prop.key for fb in move.feedbacks)
        return keys

    def presentation_payload(self) -> dict:
        pool = self.cfg.pool
        pointed = self.pointed_keys()
        items = self.state.last_presentation or frozenset()
        candidates = []
        for key in sorted(items):
            item = pool.item(key)
            candidates.append(
                {
                    **item_to_json(item, pool),
                    "properties": [
                        {
                            **property_to_json(p),
                            "pointed": p.key in pointed,
                        }
                        for p in sorted(item.properties)
                    ],
                }
            )
        payload = {"turn": self.turn, "candidates": candidates}
        terminal = self.terminal_payload()
        if terminal:
            payload["terminal"] = terminal
        return payload

    def terminal_payload(self) -> Optional[dict]:
        if not is_maximal(self.state, self.cfg):
            return None
        out = {"status": "maximal", "reason": "no legal continuation"}
        if self.cfg.target:
            transcript = Transcript(self.cfg, self.state.moves, "maximal")
            verdict = check_convergence(transcript, self.cfg.target)
            out["convergence"] = {
                "converges": verdict.converges,
                "condition": verdict.condition,
                "witness": property_to_json(verdict.witness) if verdict.witness else None,
            }
        return out

    def summary_payload(self) -> dict:
        return {
            "id": self.id,
            "turn": self.turn,
            "expects": "presentation" if self.state.expects_presentation else "feedback",
            "protocol": self.cfg.kind,
            "propertyMode": self.cfg.property_mode,
            "terminal": self.terminal_payload(),
        }

    def transcript_payload(self) -> dict:
        terminal = self.terminal_payload() or {"status": "awaiting", "reason": ""}
        transcript = Transcript(
            self.cfg, self.state.moves, terminal["status"], terminal["reason"]
        )
        from .files import transcript_to_json

        return transcript_to_json(transcript, source=self.source)


class SessionStore:
    """Disk-backed store; one writer per session, serialized per id."""

    def __init__(self, state_dir: str):
        self.state_dir = state_dir
        os.makedirs(state_dir, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._global = threading.Lock()

    def _path(self, session_id: str) -> str:
        return os.path.join(self.state_dir, f"{session_id}.jsonl")

    def _lock(self, session_id: str) -> threading.Lock:
        with self._global:
            return self._locks.setdefault(session_id, threading.Lock())

    def _append(self, session_id: str, record: dict):
        with open(self._path(session_id), "a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def create(self, payload: dict) -> Session:
        try:
            cfg = session_config(payload, enforce_towards=False)
        except (FileFormatError, DialogueError, PoolError, KeyError) as exc:
            raise ServiceError(400, f"invalid session config: {exc}") from exc
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, cfg, source=payload)
        self._append(session_id, {"config": payload})
        self._advance_reasoner(session)
        with self._global:
            self._sessions[session_id] = session
        return session

    def _advance_reasoner(self, session: Session):
        if session.state.expects_presentation and not is_maximal(
            session.state, session.cfg
        ):
            presenter = (
                walkthrough_presenter
                if session.source.get("presentationStyle") == "walkthrough"
                else next_presentation
            )
            items = presenter(session.state, session.cfg)
            move = Presentation(items)
            session.state = DialogueState(session.state.moves + (move,))
            self._append(
                session.id,
                {"turn": session.turn - 1, **move_to_json(move, session.cfg.pool)},
            )

    def get(self, session_id: str) -> Session:
        with self._global:
            if session_id in self._sessions:
                return self._sessions[session_id]
        session = self._load(session_id)
        if session is None:
            raise ServiceError(404, f"unknown session {session_id!r}")
        with self._global:
            return self._sessions.setdefault(session_id, session)

    def _load(self, session_id: str) -> Optional[Session]:
        path = self._path(session_id)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
        if not lines or "config" not in lines[0]:
            raise ServiceError(500, f"corrupt session file for {session_id!r}")
        payload = lines[0]["config"]
        cfg = session_config(payload, enforce_towards=False)
        moves = tuple(move_from_json(rec, cfg.pool) for rec in lines[1:])
        return Session(session_id, cfg, source=payload, state=DialogueState(moves))

    def feedback(self, session_id: str, payload: dict) -> dict:
        session = self.get(session_id)
        with self._lock(session_id):
            if session.state.expects_presentation:
                raise ServiceError(409, "session does not expect feedback now")
            turn = payload.get("turn")
            if turn != session.turn:
                raise ServiceError(
                    409,
                    "stale or duplicate submission",
                    {"expectedTurn": session.turn},
                )
            try:
                feedbacks = frozenset(
                    Feedback(
                        session.cfg.pool.property_by_key(item["propertyKey"]),
                        item["polarity"],
                    )
                    for item in payload.get("items", [])
                )
            except (PoolError, KeyError, DialogueError) as exc:
                raise ServiceError(422, f"bad feedback payload: {exc}") from exc
            verdict = validate_feedback(session.state, feedbacks, session.cfg)
            if not verdict.ok:
                raise ServiceError(
                    422,
                    "feedback violates the protocol",
                    {"violatedConditions": list(verdict.violations)},
                )
            move = FeedbackSet(feedbacks)
            session.state = DialogueState(session.state.moves + (move,))
            self._append(
                session_id,
                {"turn": session.turn - 1, **move_to_json(move, session.cfg.pool)},
            )
            self._advance_reasoner(session)
            terminal = session.terminal_payload()
            if terminal:
                return {"accepted": True, "terminal": terminal}
            return {"accepted": True, "next": session.presentation_payload()}


class _Handler(BaseHTTPRequestHandler):
    store: SessionStore  # injected by make_server

    def log_message(self, *args):  # quiet by default
        pass

    def _send(self, status: int, payload: dict):
        body = json.dumps(payload, sort_keys=True).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b"{}"
        try:
            return json.loads(raw or b"{}")
        except json.JSONDecodeError as exc:
            raise ServiceError(400, f"request body is not JSON: {exc}") from exc

    def _route(self, method: str):
        try:
            if method == "POST" and self.path == "/sessions":
                session = self.store.create(self._read_json())
                return self._send(
                    201,
                    {"id": session.id, "presentation": session.presentation_payload()},
                )
            m = re.fullmatch(r"/sessions/([0-9a-f]+)", self.path)
            if m and method == "GET":
                return self._send(200, self.store.get(m.group(1)).summary_payload())
            m = re.fullmatch(r"/sessions/([0-9a-f]+)/presentation", self.path)
            if m and method == "GET":
                return self._send(200, self.store.get(m.group(1)).presentation_payload())
            m = re.fullmatch(r"/sessions/([0-9a-f]+)/transcript", self.path)
            if m and method == "GET":
                return self._send(200, self.store.get(m.group(1)).transcript_payload())
            m = re.fullmatch(r"/sessions/([0-9a-f]+)/feedback", self.path)
            if m and method == "POST":
                result = self.store.feedback(m.group(1), self._read_json())
                return self._send(200, result)
            raise ServiceError(404, f"no route {method} {self.path}")
        except ServiceError as exc:
            self._send(exc.status, exc.payload)
        except Exception as exc:  # defensive: surface as JSON, not a stack dump
            self._send(500, {"error": f"{type(exc).__name__}: {exc}"})

    def do_GET(self):
        self._route("GET")

    def do_POST(self):
        self._route("POST")


def make_server(port: int, state_dir: str) -> ThreadingHTTPServer:
    store = SessionStore(state_dir)
    handler = type("BoundHandler", (_Handler,), {"store": store})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(port: int, state_dir: str):
    server = make_server(port, state_dir)
    host, bound_port = server.server_address
    print(f"listening on http://{host}:{bound_port} (state dir {state_dir})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
