"""Agent-primitive vocabulary and its translation into robot-atom plans.

The robot side exposes 14 low-level manipulation atoms (ids 0-13); the
agent side exposes 13 high-level primitives. ``translate`` expands one
agent primitive into an ordered plan of robot atoms and non-robot steps
(perceive, audio, state transitions); chip-betting primitives use the
min-count split, dispatched one push/pull per chip in 100->50->10->5
order so a single failed atom can be retried in isolation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum

from .tabletop import DENOMINATIONS, ChipCount, TableState, chip_value


class NotRepresentableError(Exception):
    """The requested chip value cannot be assembled from the inventory."""


class IllegalPrimitiveError(Exception):
    """The agent primitive is not applicable in the given table state."""


@dataclass(frozen=True)
class RobotPrimitive:
    """One dexterous-policy atom: numeric id, name, and instruction text."""

    id: int
    name: str
    instruction: str


ROBOT_PRIMITIVES: tuple[RobotPrimitive, ...] = (
    RobotPrimitive(0, "pick_up_left", "Pick up the card on the left side."),
    RobotPrimitive(1, "pick_up_right", "Pick up the card on the right side."),
    RobotPrimitive(2, "push_5", "Push forward the chips worth 5."),
    RobotPrimitive(3, "push_10", "Push forward the chips worth 10."),
    RobotPrimitive(4, "push_50", "Push forward the chips worth 50."),
    RobotPrimitive(5, "push_100", "Push forward the chips worth 100."),
    RobotPrimitive(6, "pull_5", "Pull back the chips worth 5."),
    RobotPrimitive(7, "pull_10", "Pull back the chips worth 10."),
    RobotPrimitive(8, "pull_50", "Pull back the chips worth 50."),
    RobotPrimitive(9, "pull_100", "Pull back the chips worth 100."),
    RobotPrimitive(10, "put_down_left", "Place the held card onto the left position."),
    RobotPrimitive(11, "put_down_right", "Place the held card onto the right position."),
    RobotPrimitive(12, "show_left", "Reveal the face of the left card."),
    RobotPrimitive(13, "show_right", "Reveal the face of the right card."),
)

PRIMITIVE_BY_ID = {p.id: p for p in ROBOT_PRIMITIVES}
PRIMITIVE_BY_NAME = {p.name: p for p in ROBOT_PRIMITIVES}

PUSH_ID = {5: 2, 10: 3, 50: 4, 100: 5}
PULL_ID = {5: 6, 10: 7, 50: 8, 100: 9}


class AgentPrimitiveName(str, Enum):
    """The 13 high-level actions available to the main agent."""

    WAIT = "wait"
    FOLD = "fold"
    STOP = "stop"
    RESET_TO_INIT = "reset_to_init"
    VIEW_CARD = "view_card"
    SHOW_CARD = "show_card"
    PUT_DOWN_CARD = "put_down_card"
    CHECK = "check"
    CALL = "call"
    RAISE = "raise"
    ALL_IN = "all_in"
    COLLECT_WINNINGS = "collect_winnings"
    REQUEST_HUMAN = "request_human"


@dataclass(frozen=True)
class AgentPrimitive:
    """One agent primitive instance with its arguments."""

    name: AgentPrimitiveName
    side: str | None = None  # "L" or "R"
    facing: str | None = None  # "up" or "down"
    amount: int | None = None  # raise target for the current street
    reason: str | None = None  # request_human reason text

    def label(self) -> str:
        """Canonical textual form, e.g. ``view_card(L)`` or ``raise(105)``."""
        if self.name == AgentPrimitiveName.VIEW_CARD or self.name == AgentPrimitiveName.SHOW_CARD:
            return f"{self.name.value}({self.side})"
        if self.name == AgentPrimitiveName.PUT_DOWN_CARD:
            return f"{self.name.value}({self.side},{self.facing})"
        if self.name == AgentPrimitiveName.RAISE:
            return f"raise({self.amount})"
        if self.name == AgentPrimitiveName.REQUEST_HUMAN and self.reason:
            return f"request_human({self.reason})"
        return self.name.value

    def __str__(self) -> str:
        return self.label()


def wait() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.WAIT)


def fold() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.FOLD)


def stop() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.STOP)


def reset_to_init() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.RESET_TO_INIT)


def view_card(side: str) -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.VIEW_CARD, side=side)


def show_card(side: str) -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.SHOW_CARD, side=side)


def put_down_card(side: str, facing: str) -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.PUT_DOWN_CARD, side=side, facing=facing)


def check() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.CHECK)


def call() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.CALL)


def raise_to(amount: int) -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.RAISE, amount=amount)


def all_in() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.ALL_IN)


def collect_winnings() -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.COLLECT_WINNINGS)


def request_human(reason: str | None = None) -> AgentPrimitive:
    return AgentPrimitive(AgentPrimitiveName.REQUEST_HUMAN, reason=reason)


_LABEL_RE = re.compile(r"^([a-z_]+)(?:\s*\(\s*([^)]*?)\s*\))?$")


def parse_agent_label(text: str) -> AgentPrimitive:
    """Parse the canonical textual form back into an AgentPrimitive."""
    m = _LABEL_RE.match(text.strip())
    if not m:
        raise ValueError(f"not an agent primitive label: {text!r}")
    name, arg = m.group(1), m.group(2)
    try:
        prim = AgentPrimitiveName(name)
    except ValueError:
        raise ValueError(f"unknown agent primitive: {name!r}") from None
    if prim in (AgentPrimitiveName.VIEW_CARD, AgentPrimitiveName.SHOW_CARD):
        if arg not in ("L", "R"):
            raise ValueError(f"{name} needs a side argument: {text!r}")
        return AgentPrimitive(prim, side=arg)
    if prim == AgentPrimitiveName.PUT_DOWN_CARD:
        side, _, facing = (arg or "").partition(",")
        side, facing = side.strip(), facing.strip()
        if side not in ("L", "R") or facing not in ("up", "down"):
            raise ValueError(f"put_down_card needs (side,facing): {text!r}")
        return AgentPrimitive(prim, side=side, facing=facing)
    if prim == AgentPrimitiveName.RAISE:
        if arg is None:
            raise ValueError(f"raise needs an amount: {text!r}")
        return AgentPrimitive(prim, amount=int(arg))
    if prim == AgentPrimitiveName.REQUEST_HUMAN:
        return AgentPrimitive(prim, reason=arg or None)
    if arg:
        raise ValueError(f"{name} takes no argument: {text!r}")
    return AgentPrimitive(prim)


# --- plan steps -------------------------------------------------------


@dataclass(frozen=True)
class RobotAtom:
    """Dispatch of one dexterous atom; pulls carry the source zone."""

    primitive_id: int
    zone: str | None = None  # "robot_bet" or "opponent_bet" for pull atoms

    @property
    def name(self) -> str:
        return PRIMITIVE_BY_ID[self.primitive_id].name

    def to_doc(self) -> dict:
        doc: dict = {"step": "atom", "id": self.primitive_id, "name": self.name}
        if self.zone:
            doc["zone"] = self.zone
        return doc


@dataclass(frozen=True)
class Perceive:
    """Visual read between atoms (the hole-card cache step)."""

    side: str

    def to_doc(self) -> dict:
        return {"step": "perceive", "side": self.side}


@dataclass(frozen=True)
class Audio:
    """Spoken cue; logged, not played."""

    text: str

    def to_doc(self) -> dict:
        return {"step": "audio", "text": self.text}


@dataclass(frozen=True)
class StateTransition:
    """Non-physical loop transition (sleep, fold, stop, reset, down)."""

    tag: str

    def to_doc(self) -> dict:
        return {"step": "transition", "tag": self.tag}


PlanStep = RobotAtom | Perceive | Audio | StateTransition

DONE = object()  # sentinel returned by next_atom on an exhausted plan


@dataclass(frozen=True)
class AtomPlan:
    """Ordered steps translated from one agent primitive, plus a cursor."""

    origin: AgentPrimitive
    steps: tuple[PlanStep, ...]
    cursor: int = 0

    @property
    def complete(self) -> bool:
        return self.cursor >= len(self.steps)

    def to_doc(self) -> dict:
        return {
            "origin": self.origin.label(),
            "steps": [s.to_doc() for s in self.steps],
            "cursor": self.cursor,
        }


def next_atom(plan: AtomPlan) -> tuple[PlanStep | object, AtomPlan]:
    """Return the step at the cursor and the advanced plan, or DONE."""
    if plan.complete:
        return DONE, plan
    step = plan.steps[plan.cursor]
    return step, replace(plan, cursor=plan.cursor + 1)


def split_chips(delta: int, inventory: ChipCount) -> list[int]:
    """Decompose ``delta`` into the fewest chips available in ``inventory``.

    Returns denominations in descending order. Greedy descent is optimal
    for this denomination chain (each value divides the next one up); the
    test suite holds it against an exhaustive enumeration oracle.
    """
    if delta < 0:
        raise NotRepresentableError(f"negative delta {delta}")
    if delta % 5 != 0:
        raise NotRepresentableError(f"{delta} is not a multiple of 5")
    remaining = delta
    out: list[int] = []
    for denom in DENOMINATIONS:
        take = min(remaining // denom, inventory.get(denom))
        out.extend([denom] * take)
        remaining -= denom * take
    if remaining:
        raise NotRepresentableError(
            f"cannot assemble {delta} from inventory {inventory.to_doc()}"
        )
    return out


def _push_steps(delta: int, inventory: ChipCount) -> list[PlanStep]:
    return [RobotAtom(PUSH_ID[d]) for d in split_chips(delta, inventory)]


def _all_chips_desc(chips: ChipCount) -> list[int]:
    out: list[int] = []
    for denom in DENOMINATIONS:
        out.extend([denom] * chips.get(denom))
    return out


def translate(prim: AgentPrimitive, state: TableState) -> AtomPlan:
    """Expand one agent primitive into its atom plan for ``state``.

    Pure in (prim, state). Betting primitives read the robot inventory
    and street bets to size the chip split; collect_winnings walks both
    bet zones largest denomination first, own zone before the opponent's
    within each denomination.
    """
    name = prim.name
    steps: list[PlanStep]

    if name == AgentPrimitiveName.WAIT:
        steps = [StateTransition("sleep")]
    elif name == AgentPrimitiveName.FOLD:
        steps = [StateTransition("fold")]
    elif name == AgentPrimitiveName.STOP:
        steps = [StateTransition("stop")]
    elif name == AgentPrimitiveName.RESET_TO_INIT:
        steps = [StateTransition("reset_to_init")]
    elif name == AgentPrimitiveName.VIEW_CARD:
        if prim.side == "L":
            steps = [RobotAtom(0), Perceive("L"), RobotAtom(10)]
        else:
            steps = [RobotAtom(1), Perceive("R"), RobotAtom(11)]
    elif name == AgentPrimitiveName.SHOW_CARD:
        if prim.side == "L":
            steps = [RobotAtom(0), RobotAtom(12)]
        else:
            steps = [RobotAtom(1), RobotAtom(13)]
    elif name == AgentPrimitiveName.PUT_DOWN_CARD:
        table = {("L", "down"): 10, ("R", "down"): 11, ("L", "up"): 12, ("R", "up"): 13}
        key = (prim.side, prim.facing)
        if key not in table:
            raise IllegalPrimitiveError(f"bad put_down_card arguments: {prim}")
        steps = [RobotAtom(table[key])]
    elif name == AgentPrimitiveName.CHECK:
        steps = [Audio("Check")]
    elif name == AgentPrimitiveName.CALL:
        delta = state.opponent_street_bet - state.robot_street_bet
        if delta <= 0:
            raise IllegalPrimitiveError("call with no outstanding bet")
        steps = list(_push_steps(delta, state.robot_inventory))
    elif name == AgentPrimitiveName.RAISE:
        if prim.amount is None:
            raise IllegalPrimitiveError("raise without an amount")
        delta = prim.amount - state.robot_street_bet
        if delta <= 0:
            raise IllegalPrimitiveError(
                f"raise target {prim.amount} does not exceed current bet"
            )
        steps = list(_push_steps(delta, state.robot_inventory))
    elif name == AgentPrimitiveName.ALL_IN:
        if chip_value(state.robot_inventory) == 0:
            raise IllegalPrimitiveError("all_in with an empty inventory")
        steps = [RobotAtom(PUSH_ID[d]) for d in _all_chips_desc(state.robot_inventory)]
    elif name == AgentPrimitiveName.COLLECT_WINNINGS:
        steps = []
        for denom in DENOMINATIONS:
            steps.extend(
                RobotAtom(PULL_ID[denom], zone="robot_bet")
                for _ in range(state.robot_bet.get(denom))
            )
            steps.extend(
                RobotAtom(PULL_ID[denom], zone="opponent_bet")
                for _ in range(state.opponent_bet.get(denom))
            )
        if not steps:
            raise IllegalPrimitiveError("collect_winnings with empty bet zones")
    elif name == AgentPrimitiveName.REQUEST_HUMAN:
        steps = [Audio(prim.reason or "Please help."), StateTransition("down")]
    else:  # pragma: no cover - the enum is closed
        raise IllegalPrimitiveError(f"unknown primitive {prim}")

    return AtomPlan(origin=prim, steps=tuple(steps))


def first_atom_name(prim: AgentPrimitive) -> str | None:
    """Name of the atom a primitive dispatches first, where determinable.

    For call/all_in/collect_winnings the first atom depends on table
    quantities, so callers that only have a label fall back to the
    largest-denomination convention.
    """
    name = prim.name
    if name == AgentPrimitiveName.VIEW_CARD or name == AgentPrimitiveName.SHOW_CARD:
        return "pick_up_left" if prim.side == "L" else "pick_up_right"
    if name == AgentPrimitiveName.PUT_DOWN_CARD:
        table = {
            ("L", "down"): "put_down_left",
            ("R", "down"): "put_down_right",
            ("L", "up"): "show_left",
            ("R", "up"): "show_right",
        }
        return table.get((prim.side, prim.facing))
    if name == AgentPrimitiveName.RAISE and prim.amount is not None:
        unbounded = ChipCount(c5=10**6, c10=10**6, c50=10**6, c100=10**6)
        try:
            denoms = split_chips(prim.amount, unbounded)
        except NotRepresentableError:
            return None
        return PRIMITIVE_BY_ID[PUSH_ID[denoms[0]]].name if denoms else None
    if name == AgentPrimitiveName.CALL or name == AgentPrimitiveName.ALL_IN:
        return "push_100"
    if name == AgentPrimitiveName.COLLECT_WINNINGS:
        return "pull_100"
    return None


def dispatches_robot_atom(prim: AgentPrimitive) -> bool:
    """Whether the primitive's plan begins with a robot atom."""
    return prim.name in (
        AgentPrimitiveName.VIEW_CARD,
        AgentPrimitiveName.SHOW_CARD,
        AgentPrimitiveName.PUT_DOWN_CARD,
        AgentPrimitiveName.CALL,
        AgentPrimitiveName.RAISE,
        AgentPrimitiveName.ALL_IN,
        AgentPrimitiveName.COLLECT_WINNINGS,
    )
