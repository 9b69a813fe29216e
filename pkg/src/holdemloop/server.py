"""Wire protocol and session service.

Messages are newline-delimited canonical documents over a duplex byte
stream; every message carries ``type``, ``session_id``, and ``seq``.
Outbound seq numbers are a single per-session counter, so clients detect
gaps and can ask for a resync. The service serializes all handling per
session; connection handlers only enqueue.
"""

from __future__ import annotations

import logging
import socketserver
import threading
import time
from dataclasses import dataclass, field

from .session import Session, SessionConfig
from .tabletop import Facing, HoleSlot, canonical_dumps, canonical_loads
from .translate import AgentPrimitiveName, parse_agent_label

logger = logging.getLogger(__name__)


class UnknownSessionError(Exception):
    """Message addressed to a session the service does not hold."""


class OutOfTurnError(Exception):
    """Opponent action arrived while it is not the opponent's turn."""


class MalformedError(Exception):
    """Message failed structural validation."""


OPPONENT_ACTION_NAMES = (
    AgentPrimitiveName.CHECK,
    AgentPrimitiveName.CALL,
    AgentPrimitiveName.RAISE,
    AgentPrimitiveName.ALL_IN,
    AgentPrimitiveName.FOLD,
)


def public_view(session: Session, role: str) -> dict:
    """Table view for one console role; unrevealed cards stay hidden.

    The opponent console sees its own hole cards; observers see only
    face-up cards on either side. The robot's unrevealed holes are never
    sent to anyone.
    """
    truth = session.truth

    def slot_doc(slot: HoleSlot | None, owned: bool) -> dict | None:
        if slot is None:
            return None
        if slot.facing == Facing.UP or owned:
            return {"card": str(slot.card), "facing": slot.facing.value}
        return {"card": None, "facing": slot.facing.value}

    own = role == "opponent"
    return {
        "loop_stage": session.stage.value,
        "street": truth.street.value,
        "showdown_outcome": session.so.value,
        "robot_blind": truth.robot_blind.value,
        "is_robot_turn": truth.is_robot_turn,
        "scene_stable": truth.scene_stable,
        "community_cards": [str(c) for c in truth.community_cards],
        "robot_inventory": truth.robot_inventory.to_doc(),
        "opponent_inventory": truth.opponent_inventory.to_doc(),
        "robot_bet": truth.robot_bet.to_doc(),
        "opponent_bet": truth.opponent_bet.to_doc(),
        "robot_hole": [
            slot_doc(truth.hole_left, False),
            slot_doc(truth.hole_right, False),
        ],
        "opponent_hole": [
            slot_doc(truth.opponent_hole_left, own),
            slot_doc(truth.opponent_hole_right, own),
        ],
    }


@dataclass
class _Client:
    client_id: str
    role: str
    send: object  # callable(dict) -> None


@dataclass
class ServedSession:
    """One live hand plus its subscribers and outbound seq counter."""

    session_id: str
    session: Session
    seq: int = 0
    clients: dict[str, _Client] = field(default_factory=dict)
    lock: threading.RLock = field(default_factory=threading.RLock)
    turn_signal: threading.Condition = field(default_factory=threading.Condition)

    def next_seq(self) -> int:
        self.seq += 1
        return self.seq


class SessionService:
    """Holds sessions and processes wire messages one at a time each."""

    def __init__(self) -> None:
        self.sessions: dict[str, ServedSession] = {}
        self._lock = threading.Lock()

    def create_session(self, session_id: str, config: SessionConfig) -> ServedSession:
        with self._lock:
            if session_id in self.sessions:
                raise ValueError(f"session {session_id!r} already exists")
            served = ServedSession(session_id=session_id, session=Session(config))
            self.sessions[session_id] = served
            return served

    def get(self, session_id: str) -> ServedSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id or "<missing>") from None

    # -- message handling -------------------------------------------------

    def handle_message(self, msg: object, client_id: str, send: object) -> list[dict]:
        """Process one inbound message; returns the direct replies.

        Broadcasts (state updates to other subscribers) go through their
        own ``send`` callables. Errors come back as error replies with a
        machine-readable code, never as exceptions to the transport.
        """
        try:
            return self._dispatch(msg, client_id, send)
        except MalformedError as exc:
            return [self._error(None, "Malformed", str(exc))]
        except UnknownSessionError as exc:
            return [self._error(None, "UnknownSession", str(exc))]

    def _dispatch(self, msg: object, client_id: str, send: object) -> list[dict]:
        if not isinstance(msg, dict) or "type" not in msg:
            raise MalformedError("message must be an object with a type")
        mtype = msg["type"]
        if mtype in ("join", "subscribe"):
            return self._handle_join(msg, client_id, send)

        served = self.get(str(msg.get("session_id", "")))
        with served.lock:
            if mtype == "opponent_action":
                return self._handle_action(served, msg)
            if mtype == "resign":
                return self._handle_action(served, {**msg, "action": "fold"})
            if mtype == "human_help_ack":
                return self._handle_ack(served)
            if mtype == "resync":
                client = served.clients.get(client_id)
                role = client.role if client else "observer"
                return [self._state_update(served, role)]
            raise MalformedError(f"unknown message type {mtype!r}")

    def _handle_join(self, msg: dict, client_id: str, send: object) -> list[dict]:
        served = self.get(str(msg.get("session_id", "")))
        role = "opponent" if msg["type"] == "join" and msg.get("role") == "opponent" else "observer"
        with served.lock:
            served.clients[client_id] = _Client(client_id=client_id, role=role, send=send)
            joined = {
                "type": "joined",
                "session_id": served.session_id,
                "seq": served.next_seq(),
                "role": role,
            }
            return [joined, self._state_update(served, role)]

    def _handle_action(self, served: ServedSession, msg: dict) -> list[dict]:
        raw = msg.get("action")
        if not isinstance(raw, str):
            raise MalformedError("opponent_action needs an action label")
        try:
            action = parse_agent_label(raw)
        except ValueError as exc:
            raise MalformedError(str(exc)) from None
        if action.name not in OPPONENT_ACTION_NAMES:
            raise MalformedError(f"not an opponent action: {raw!r}")

        session = served.session
        if session.finished or session.truth.is_robot_turn:
            return [
                self._error(
                    served, "OutOfTurn", "it is not the opponent's turn", ack_seq=True
                )
            ]
        session.feed_opponent_action(action)
        with served.turn_signal:
            served.turn_signal.notify_all()
        return [
            {
                "type": "action_accepted",
                "session_id": served.session_id,
                "seq": served.next_seq(),
                "action": action.label(),
            }
        ]

    def _handle_ack(self, served: ServedSession) -> list[dict]:
        served.session.resume_from_down()
        with served.turn_signal:
            served.turn_signal.notify_all()
        return [
            {
                "type": "resumed",
                "session_id": served.session_id,
                "seq": served.next_seq(),
            }
        ]

    # -- outbound ---------------------------------------------------------

    def _state_update(self, served: ServedSession, role: str) -> dict:
        return {
            "type": "state_update",
            "session_id": served.session_id,
            "seq": served.next_seq(),
            "state_index": served.session.state_index,
            "public": public_view(served.session, role),
        }

    def _error(
        self,
        served: ServedSession | None,
        code: str,
        message: str,
        ack_seq: bool = False,
    ) -> dict:
        return {
            "type": "error",
            "session_id": served.session_id if served else None,
            "seq": served.next_seq() if served and ack_seq else 0,
            "code": code,
            "message": message,
        }

    def broadcast_state(self, served: ServedSession) -> None:
        with served.lock:
            for client in list(served.clients.values()):
                try:
                    client.send(self._state_update(served, client.role))  # type: ignore[operator]
                except Exception:
                    logger.warning("dropping unreachable client %s", client.client_id)
                    served.clients.pop(client.client_id, None)

    def broadcast(self, served: ServedSession, message: dict) -> None:
        with served.lock:
            for client in list(served.clients.values()):
                payload = {**message, "seq": served.next_seq()}
                try:
                    client.send(payload)  # type: ignore[operator]
                except Exception:
                    served.clients.pop(client.client_id, None)

    # -- session driving ----------------------------------------------------

    def run_session(
        self,
        served: ServedSession,
        turn_tick: float | None = 0.05,
        state_tick: float = 0.0,
    ) -> None:
        """Advance a served hand to termination, broadcasting every state.

        With a console-driven opponent the loop parks between captures
        whenever the hand needs console input (the opponent's betting
        turn, or a human-help acknowledgement), so wait states do not
        pile into the escalation budget while a human is thinking.
        ``turn_tick`` only bounds how often the park condition is
        rechecked; ``state_tick`` paces captures like a camera cadence.
        """
        session = served.session
        while not session.finished:
            if state_tick:
                time.sleep(state_tick)
            with served.lock:
                session.step()
                if session.stage.value == "down" and not session.finished:
                    self.broadcast(
                        served,
                        {
                            "type": "human_help",
                            "session_id": served.session_id,
                            "reason": session.help_reason,
                        },
                    )
            self.broadcast_state(served)
            with served.turn_signal:
                while self._awaiting_console(session):
                    served.turn_signal.wait(timeout=turn_tick)
        self.broadcast(
            served,
            {
                "type": "hand_over",
                "session_id": served.session_id,
                "outcome": session.outcome,
                "cause": session.termination_cause,
            },
        )

    @staticmethod
    def _awaiting_console(session: Session) -> bool:
        if session.opponent_agent is not None or session.finished:
            return False
        if session.help_reason is not None:
            return True  # parked for a human-help acknowledgement
        return (
            not session.truth.is_robot_turn
            and session.truth.street.value
            in ("preflop", "flop", "turn", "river")
            and not session.console_actions
        )

# --- TCP transport --------------------------------------------------------


class _LineHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        service: SessionService = self.server.service  # type: ignore[attr-defined]
        client_id = f"{self.client_address[0]}:{self.client_address[1]}"
        write_lock = threading.Lock()

        def send(message: dict) -> None:
            data = canonical_dumps(message).encode("utf-8") + b"\n"
            with write_lock:
                self.wfile.write(data)
                self.wfile.flush()

        for line in self.rfile:
            line = line.strip()
            if not line:
                continue
            try:
                msg = canonical_loads(line)
            except ValueError:
                send({"type": "error", "session_id": None, "seq": 0,
                      "code": "Malformed", "message": "not a canonical document"})
                continue
            for reply in service.handle_message(msg, client_id, send):
                send(reply)


class WireServer(socketserver.ThreadingTCPServer):
    """Newline-delimited document server for consoles and agents."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], service: SessionService) -> None:
        super().__init__(address, _LineHandler)
        self.service = service


def serve(
    service: SessionService, host: str = "127.0.0.1", port: int = 0
) -> tuple[WireServer, threading.Thread]:
    """Start the wire server on a background thread; returns it unjoined."""
    server = WireServer((host, port), service)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
