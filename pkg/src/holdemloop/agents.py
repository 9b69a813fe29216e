"""Pluggable decision makers for the two seats.

The robot-side main agent is consulted only at invoke-agent gates; the
opponent seat reuses the same machinery with instant effects. Scripted
agents consume a fixed primitive list, the heuristic agent thresholds a
win-probability estimate, and the external kind forwards decision
requests over a transport (an attachment point for an LLM-backed agent,
not implemented here).
"""

from __future__ import annotations

import concurrent.futures
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations

from .perceive import ParsedState
from .poker import DuplicateCardError, evaluate_hand
from .tabletop import Card, Street, full_deck
from .translate import (
    AgentPrimitive,
    AgentPrimitiveName,
    check,
    fold,
    request_human,
)

logger = logging.getLogger(__name__)

EXHAUSTIVE_CASE_LIMIT = 10**6


class ScriptExhaustedError(Exception):
    """A scripted agent ran out of entries."""


class ExternalTimeoutError(Exception):
    """The external decision endpoint did not answer in time."""


@dataclass(frozen=True)
class DecisionRequest:
    """Everything the main agent sees at a decision state."""

    parsed: ParsedState
    cached_holes: dict[str, Card | None]
    legal: frozenset[AgentPrimitive]
    street: Street
    pot_value: int

    def to_doc(self) -> dict:
        return {
            "parsed": self.parsed.to_doc(),
            "cached_holes": {
                side: str(card) if card else None
                for side, card in sorted(self.cached_holes.items())
            },
            "legal": sorted(p.label() for p in self.legal),
            "street": self.street.value,
            "pot_value": self.pot_value,
        }


@dataclass
class ScriptedAgent:
    """Replays a fixed decision list; exhaustion folds."""

    script: list[AgentPrimitive]
    cursor: int = 0

    def next_decision(self, legal: frozenset[AgentPrimitive]) -> AgentPrimitive:
        while self.cursor < len(self.script):
            candidate = self.script[self.cursor]
            self.cursor += 1
            if candidate in legal or candidate.name == AgentPrimitiveName.REQUEST_HUMAN:
                return candidate
            logger.warning("scripted entry %s is illegal here; skipped", candidate)
        raise ScriptExhaustedError("script exhausted")


@dataclass(frozen=True)
class HeuristicThresholds:
    """Win-probability cutoffs for the baseline table agent."""

    fold_below: float = 0.3
    raise_at: float = 0.7
    all_in_at: float = 0.95
    strength_trials: int = 400


@dataclass
class HeuristicAgent:
    thresholds: HeuristicThresholds = field(default_factory=HeuristicThresholds)


@dataclass
class ExternalAgent:
    """Forwards decision requests to an external endpoint.

    ``transport`` takes the request document and returns the reply
    document ``{"primitive": "<label>"}``; any exception or timeout is
    treated as unreachable and falls back to a human-help request.
    """

    transport: object  # callable(dict) -> dict
    timeout: float = 30.0


AgentKind = ScriptedAgent | HeuristicAgent | ExternalAgent


def decide(req: DecisionRequest, agent: AgentKind, rng: random.Random) -> AgentPrimitive:
    """One decision, always a member of the legal set (or request_human)."""
    if isinstance(agent, ScriptedAgent):
        try:
            return agent.next_decision(req.legal)
        except ScriptExhaustedError:
            return fold() if fold() in req.legal else _fallback(req)
    if isinstance(agent, HeuristicAgent):
        return _heuristic_decision(req, agent, rng)
    if isinstance(agent, ExternalAgent):
        return _external_decision(req, agent)
    raise TypeError(f"unknown agent kind {agent!r}")


def _fallback(req: DecisionRequest) -> AgentPrimitive:
    if check() in req.legal:
        return check()
    if req.legal:
        return sorted(req.legal, key=lambda p: p.label())[0]
    return request_human("no legal action")


def _external_decision(req: DecisionRequest, agent: ExternalAgent) -> AgentPrimitive:
    from .translate import parse_agent_label

    pool = concurrent.futures.ThreadPoolExecutor(max_workers=1)
    try:
        future = pool.submit(agent.transport, req.to_doc())  # type: ignore[arg-type]
        try:
            reply = future.result(timeout=agent.timeout)
        except concurrent.futures.TimeoutError:
            raise ExternalTimeoutError(f"no reply within {agent.timeout}s") from None
        primitive = parse_agent_label(reply["primitive"])
    except Exception as exc:  # unreachable endpoint, timeout, bad reply
        logger.warning("external agent failed (%s); requesting human help", exc)
        return request_human("external agent unavailable")
    finally:
        pool.shutdown(wait=False)
    if primitive in req.legal or primitive.name == AgentPrimitiveName.REQUEST_HUMAN:
        return primitive
    logger.warning("external agent chose illegal %s; requesting human help", primitive)
    return request_human("external agent chose an illegal action")


def _legal_by_name(req: DecisionRequest, name: AgentPrimitiveName) -> list[AgentPrimitive]:
    return sorted(
        (p for p in req.legal if p.name == name), key=lambda p: p.label()
    )


def _heuristic_decision(
    req: DecisionRequest, agent: HeuristicAgent, rng: random.Random
) -> AgentPrimitive:
    for name in (
        AgentPrimitiveName.COLLECT_WINNINGS,
        AgentPrimitiveName.SHOW_CARD,
        AgentPrimitiveName.PUT_DOWN_CARD,
    ):
        found = _legal_by_name(req, name)
        if found:
            return found[0]

    holes = [c for c in req.cached_holes.values() if c is not None]
    if len(holes) < 2:
        views = _legal_by_name(req, AgentPrimitiveName.VIEW_CARD)
        if views:
            return views[0]
        return _fallback(req)

    board = list(req.parsed.table.community_cards)
    strength = hand_strength(
        holes,
        board,
        trials=agent.thresholds.strength_trials,
        rng=rng,
        exhaustive_limit=2_000,  # the table agent trades exactness for latency
    )
    facing_bet = any(p.name == AgentPrimitiveName.CALL for p in req.legal) or any(
        p.name == AgentPrimitiveName.FOLD for p in req.legal
    )
    raises = _legal_by_name(req, AgentPrimitiveName.RAISE)

    if strength >= agent.thresholds.all_in_at:
        all_ins = _legal_by_name(req, AgentPrimitiveName.ALL_IN)
        if all_ins:
            return all_ins[0]
    if strength >= agent.thresholds.raise_at and raises:
        return _pot_matching_raise(req, raises)
    if strength < agent.thresholds.fold_below and facing_bet:
        folds = _legal_by_name(req, AgentPrimitiveName.FOLD)
        if folds:
            return folds[0]
    calls = _legal_by_name(req, AgentPrimitiveName.CALL)
    if calls:
        return calls[0]
    checks = _legal_by_name(req, AgentPrimitiveName.CHECK)
    if checks:
        return checks[0]
    if raises:
        return raises[0]  # must open (e.g. unposted blind): smallest target
    return _fallback(req)


def _pot_matching_raise(
    req: DecisionRequest, raises: list[AgentPrimitive]
) -> AgentPrimitive:
    target = (req.pot_value // 5) * 5
    candidates = sorted(raises, key=lambda p: p.amount or 0)
    at_most = [p for p in candidates if (p.amount or 0) <= target]
    return at_most[-1] if at_most else candidates[0]


# --- hand strength ------------------------------------------------------


def hand_outcome_probs(
    hole: list[Card],
    board: list[Card],
    trials: int = 10_000,
    rng: random.Random | None = None,
    exhaustive_limit: int = EXHAUSTIVE_CASE_LIMIT,
) -> tuple[float, float, float]:
    """(win, tie, lose) vs a uniform opponent hand and board completion.

    Exhaustive when the enumeration stays within the case limit, which
    at the default covers turn and river boards; otherwise samples
    ``trials`` completions from the session rng.
    """
    cards = list(hole) + list(board)
    if len(set(cards)) != len(cards):
        raise DuplicateCardError("duplicate card across hole and board")
    if len(hole) != 2 or len(board) not in (0, 3, 4, 5):
        raise ValueError("hand_strength needs 2 hole cards and 0/3/4/5 board cards")

    remaining = [c for c in full_deck() if c not in cards]
    to_come = 5 - len(board)
    opp_hands = len(remaining) * (len(remaining) - 1) // 2
    completions = 1
    pool_after = len(remaining) - 2
    for i in range(to_come):
        completions = completions * (pool_after - i) // (i + 1)

    if opp_hands * completions <= exhaustive_limit:
        return _exhaustive_probs(hole, board, remaining, to_come)
    rng = rng or random.Random(0)
    return _sampled_probs(hole, board, remaining, to_come, trials, rng)


def hand_strength(
    hole: list[Card],
    board: list[Card],
    trials: int = 10_000,
    rng: random.Random | None = None,
    exhaustive_limit: int = EXHAUSTIVE_CASE_LIMIT,
) -> float:
    """Probability of strictly beating a uniform random opponent."""
    win, _, _ = hand_outcome_probs(
        hole, board, trials=trials, rng=rng, exhaustive_limit=exhaustive_limit
    )
    return win


def _compare(hole: list[Card], opp: tuple[Card, ...], board: list[Card]) -> int:
    ours = evaluate_hand(hole + board)
    theirs = evaluate_hand(list(opp) + board)
    return (ours > theirs) - (ours < theirs)


def _exhaustive_probs(
    hole: list[Card], board: list[Card], remaining: list[Card], to_come: int
) -> tuple[float, float, float]:
    win = tie = total = 0
    for opp in combinations(remaining, 2):
        pool = [c for c in remaining if c not in opp]
        for extra in combinations(pool, to_come):
            outcome = _compare(hole, opp, board + list(extra))
            total += 1
            if outcome > 0:
                win += 1
            elif outcome == 0:
                tie += 1
    return win / total, tie / total, (total - win - tie) / total


def _sampled_probs(
    hole: list[Card],
    board: list[Card],
    remaining: list[Card],
    to_come: int,
    trials: int,
    rng: random.Random,
) -> tuple[float, float, float]:
    win = tie = 0
    for _ in range(trials):
        draw = rng.sample(remaining, 2 + to_come)
        opp = tuple(draw[:2])
        outcome = _compare(hole, opp, board + draw[2:])
        if outcome > 0:
            win += 1
        elif outcome == 0:
            tie += 1
    return win / trials, tie / trials, (trials - win - tie) / trials
