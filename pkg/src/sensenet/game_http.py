"""HTTP+JSON endpoints for the quiz-game service.

Routes (all ids are opaque strings; bodies and responses are JSON,
UTF-8):

    POST /games                        {"editor_profile": profile}
    GET  /games/{id}
    POST /games/{id}/wizard/{step}     step payload (see below)
    GET  /games/{id}/suggestions?secret=word&synonyms=a,b
    POST /sessions                     {"game_id": id, "player_profile": profile}
    GET  /sessions/{id}
    POST /sessions/{id}/roll           {}
    POST /sessions/{id}/reveal         {"index": n}
    POST /sessions/{id}/guess          {"guess": text}

A profile is {"gender","age_group","education","city","state"}. Wizard
payloads: step 1 {"profile_query": [[..],[..],[..],[..],[..]]}, step 2
{"theme"}, step 3 {"topics"}, step 4 {"cards": [{"topic","secret_word",
"synonyms"}]}, step 5 {"clues": {card_id: [{"text","source"}]}}, steps 6
and 7 {}. Errors come back as {"error": message} with status 400; CORS is
open so browser clients can call from any origin.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .core import ProfileAttrs
from .filtering import QueryError
from .game import Card, GameError, GameInstance, GameService, PlaySession
from .store import StoreError


def profile_from_json(data: dict) -> ProfileAttrs:
    try:
        return ProfileAttrs(data["gender"], data["age_group"], data["education"],
                            data["city"], data["state"])
    except (KeyError, TypeError) as exc:
        raise GameError(f"incomplete profile: {exc}") from exc


def game_view(game: GameInstance) -> dict:
    return {
        "game_id": game.id,
        "state": game.state,
        "step_completed": game.step_completed,
        "published": game.published,
        "theme": game.theme,
        "topics": list(game.topics),
        "profile_query": game.profile_query.as_lists() if game.profile_query else None,
        "cards": [
            {
                "card_id": card.id,
                "topic": card.topic,
                "secret_word": card.secret_word,
                "synonyms": list(card.synonyms),
                "clues": [{"text": c.text, "source": c.source} for c in card.clues],
            }
            for card in game.cards.values()
        ],
    }


def session_view(session: PlaySession, card: Optional[Card]) -> dict:
    return {
        "session_id": session.id,
        "game_id": session.game_id,
        "topic": session.topic,
        "card_id": session.card_id,
        "clue_count": len(card.clues) if card else 0,
        "revealed": list(session.revealed),
        "guesses": [{"text": g.text, "outcome": g.outcome} for g in session.guesses],
        "solved": session.solved,
    }


class _Handler(BaseHTTPRequestHandler):
    service: GameService  # set by server factory
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # quiet by default
        pass

    # -- plumbing -----------------------------------------------------------

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _read_body(self) -> dict:
        # Always drain the request body, even for handlers that ignore it:
        # unread bytes would corrupt the next request on a kept-alive
        # connection.
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            return json.loads(raw.decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise GameError(f"invalid JSON body: {exc}") from exc

    def _body(self) -> dict:
        return self._payload

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:
        self._route("GET")

    def do_POST(self) -> None:
        self._route("POST")

    def _route(self, method: str) -> None:
        url = urlparse(self.path)
        try:
            self._payload = self._read_body()
            for pattern, handler_method, handler in _ROUTES:
                m = pattern.fullmatch(url.path)
                if m and handler_method == method:
                    handler(self, m, parse_qs(url.query))
                    return
            self._send(404, {"error": f"no route {method} {url.path}"})
        except (GameError, StoreError, QueryError, KeyError, ValueError) as exc:
            self._send(400, {"error": str(exc)})

    # -- handlers ------------------------------------------------------------

    def _create_game(self, m, query) -> None:
        body = self._body()
        profile = profile_from_json(body.get("editor_profile") or {})
        game = self.service.create_game(profile)
        self._send(200, game_view(game))

    def _get_game(self, m, query) -> None:
        self._send(200, game_view(self.service.get_game(m.group(1))))

    def _wizard(self, m, query) -> None:
        game = self.service.wizard_advance(m.group(1), int(m.group(2)), self._body())
        self._send(200, game_view(game))

    def _suggestions(self, m, query) -> None:
        game = self.service.get_game(m.group(1))
        if game.profile_query is None:
            raise GameError("define the population profile (step 1) first")
        secret = (query.get("secret") or [""])[0]
        if not secret:
            raise GameError("query parameter 'secret' is required")
        synonyms = [s for s in (query.get("synonyms") or [""])[0].split(",") if s]
        suggestions = self.service.suggest_clues(secret, synonyms, game.profile_query)
        related = self.service.related_concepts(secret, synonyms, game.profile_query)
        self._send(200, {
            "suggestions": [
                {"sentence": s.sentence, "relation": s.relation_line,
                 "weight": s.weight}
                for s in suggestions
            ],
            "related_concepts": related,
        })

    def _create_session(self, m, query) -> None:
        body = self._body()
        profile = profile_from_json(body.get("player_profile") or {})
        session = self.service.start_session(body.get("game_id", ""), profile)
        self._send(200, session_view(session, None))

    def _get_session(self, m, query) -> None:
        session = self.service.get_session(m.group(1))
        card = None
        if session.card_id:
            card = self.service.get_game(session.game_id).cards[session.card_id]
        self._send(200, session_view(session, card))

    def _roll(self, m, query) -> None:
        topic, card = self.service.roll(m.group(1))
        session = self.service.get_session(m.group(1))
        self._send(200, session_view(session, card))

    def _reveal(self, m, query) -> None:
        body = self._body()
        index = int(body.get("index", 0))
        text = self.service.reveal_clue(m.group(1), index)
        self._send(200, {"index": index, "text": text})

    def _guess(self, m, query) -> None:
        body = self._body()
        outcome = self.service.submit_guess(m.group(1), body.get("guess", ""))
        session = self.service.get_session(m.group(1))
        self._send(200, {"outcome": outcome, "solved": session.solved})


_ROUTES = [
    (re.compile(r"/games"), "POST", _Handler._create_game),
    (re.compile(r"/games/([^/]+)"), "GET", _Handler._get_game),
    (re.compile(r"/games/([^/]+)/wizard/(\d+)"), "POST", _Handler._wizard),
    (re.compile(r"/games/([^/]+)/suggestions"), "GET", _Handler._suggestions),
    (re.compile(r"/sessions"), "POST", _Handler._create_session),
    (re.compile(r"/sessions/([^/]+)"), "GET", _Handler._get_session),
    (re.compile(r"/sessions/([^/]+)/roll"), "POST", _Handler._roll),
    (re.compile(r"/sessions/([^/]+)/reveal"), "POST", _Handler._reveal),
    (re.compile(r"/sessions/([^/]+)/guess"), "POST", _Handler._guess),
]


class GameHttpServer:
    """Threaded HTTP front for a GameService."""

    def __init__(self, service: GameService, host: str = "127.0.0.1", port: int = 0):
        handler = type("BoundHandler", (_Handler,), {"service": service})
        self._server = ThreadingHTTPServer((host, port), handler)
        self.host = host
        self.port = self._server.server_address[1]
        self._thread: Optional[threading.Thread] = None

    def start(self) -> None:
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
