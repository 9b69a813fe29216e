"""Noisy perception channel: project the truth, then corrupt per field.

The parsed document follows the fixed schema the agent writes at every
captured state. Corruption is silent (errors are not self-reported in
``uncertain_fields`` unless the self-aware flag is on) and always yields
a schema-valid document.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .poker import ShowdownOutcome
from .tabletop import (
    Blind,
    Card,
    ChipCount,
    DENOMINATIONS,
    LoopStage,
    TableState,
    full_deck,
)

CHALLENGE_FIELDS = ("LS", "TO", "BI", "CC", "CB", "RCI", "OCI", "SO")


@dataclass(frozen=True)
class ParsedTable:
    """Table sub-record of the parsed schema."""

    scene_stable: bool
    is_my_turn: bool
    community_cards: tuple[Card, ...]
    my_chips: ChipCount
    opponent_chips: ChipCount
    my_current_bet: ChipCount
    opponent_bet: ChipCount
    uncertain_fields: tuple[str, ...] = ()

    def to_doc(self) -> dict:
        return {
            "scene_stable": self.scene_stable,
            "is_my_turn": self.is_my_turn,
            "community_cards": [str(c) for c in self.community_cards],
            "my_chips": self.my_chips.to_doc(),
            "opponent_chips": self.opponent_chips.to_doc(),
            "my_current_bet": self.my_current_bet.to_doc(),
            "opponent_bet": self.opponent_bet.to_doc(),
            "uncertain_fields": list(self.uncertain_fields),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ParsedTable":
        return cls(
            scene_stable=bool(doc["scene_stable"]),
            is_my_turn=bool(doc["is_my_turn"]),
            community_cards=tuple(Card.parse(c) for c in doc["community_cards"]),
            my_chips=ChipCount.from_doc(doc["my_chips"]),
            opponent_chips=ChipCount.from_doc(doc["opponent_chips"]),
            my_current_bet=ChipCount.from_doc(doc["my_current_bet"]),
            opponent_bet=ChipCount.from_doc(doc["opponent_bet"]),
            uncertain_fields=tuple(doc.get("uncertain_fields", ())),
        )


@dataclass(frozen=True)
class ParsedState:
    """Structured visual summary of one captured state."""

    loop_stage: LoopStage
    blind: Blind
    showdown_outcome: ShowdownOutcome
    table: ParsedTable

    def to_doc(self) -> dict:
        return {
            "loop_stage": self.loop_stage.value,
            "blind": self.blind.value,
            "showdown_outcome": self.showdown_outcome.value,
            "table": self.table.to_doc(),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ParsedState":
        return cls(
            loop_stage=LoopStage(doc["loop_stage"]),
            blind=Blind(doc["blind"]),
            showdown_outcome=ShowdownOutcome(doc["showdown_outcome"]),
            table=ParsedTable.from_doc(doc["table"]),
        )


def parsed_schema_problems(doc: object) -> list[str]:
    """Shape and domain problems in a parsed-state document."""
    problems: list[str] = []
    if not isinstance(doc, dict):
        return ["document is not an object"]
    try:
        state = ParsedState.from_doc(doc)
    except (KeyError, ValueError, TypeError) as exc:
        return [f"malformed: {exc}"]
    if len(state.table.community_cards) not in (0, 3, 4, 5):
        problems.append(
            f"community_cards length {len(state.table.community_cards)}"
        )
    if len(set(state.table.community_cards)) != len(state.table.community_cards):
        problems.append("duplicate community card")
    return problems


def project_truth(
    truth: TableState,
    stage: LoopStage,
    outcome: ShowdownOutcome,
    uncertain: tuple[str, ...] = (),
) -> ParsedState:
    """Faithful projection of the table into the parsed schema.

    Hole-card identity is deliberately absent: the schema has no hole
    field, and card identity flows through the view-card cache step.
    """
    return ParsedState(
        loop_stage=stage,
        blind=truth.robot_blind,
        showdown_outcome=outcome,
        table=ParsedTable(
            scene_stable=truth.scene_stable,
            is_my_turn=truth.is_robot_turn,
            community_cards=truth.community_cards,
            my_chips=truth.robot_inventory,
            opponent_chips=truth.opponent_inventory,
            my_current_bet=truth.robot_bet,
            opponent_bet=truth.opponent_bet,
            uncertain_fields=uncertain,
        ),
    )


@dataclass(frozen=True)
class NoiseProfile:
    """Per-field silent error rates for the eight perception challenges."""

    name: str = "noiseless"
    rates: dict[str, float] = field(default_factory=dict)
    mark_uncertain: bool = False  # self-aware mode: corrupted fields get flagged

    def __post_init__(self) -> None:
        for key, rate in self.rates.items():
            if key not in CHALLENGE_FIELDS:
                raise ValueError(f"unknown challenge field {key!r}")
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"rate out of range for {key}: {rate}")

    def rate(self, field_name: str) -> float:
        return self.rates.get(field_name, 0.0)

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "rates": {k: self.rates.get(k, 0.0) for k in CHALLENGE_FIELDS},
            "mark_uncertain": self.mark_uncertain,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "NoiseProfile":
        return cls(
            name=doc.get("name", "unnamed"),
            rates={k: float(v) for k, v in doc.get("rates", {}).items() if float(v) > 0},
            mark_uncertain=bool(doc.get("mark_uncertain", False)),
        )


NOISELESS = NoiseProfile()


def _wrong_choice(rng: random.Random, options: list, current) -> object:
    pool = [o for o in options if o != current]
    return rng.choice(pool)


def _corrupt_chips(chips: ChipCount, rng: random.Random) -> ChipCount:
    """Perturb one uniformly chosen denomination count by one chip."""
    denom = rng.choice(DENOMINATIONS)
    count = chips.get(denom)
    if count == 0:
        delta = 1
    else:
        delta = rng.choice((-1, 1))
    return chips.with_delta(denom, delta)


def _corrupt_board(board: tuple[Card, ...], rng: random.Random) -> tuple[Card, ...]:
    """Change the board multiset while keeping a legal length (0/3/4/5)."""
    absent = [c for c in full_deck() if c not in board]
    if len(board) == 0:
        return tuple(rng.sample(absent, 3))  # hallucinated flop
    moves = ["replace"]
    if len(board) in (3, 4):
        moves.append("add")
    if len(board) in (4, 5):
        moves.append("drop")
    move = rng.choice(moves)
    cards = list(board)
    if move == "add":
        cards.append(rng.choice(absent))
    elif move == "drop":
        cards.pop(rng.randrange(len(cards)))
    else:
        cards[rng.randrange(len(cards))] = rng.choice(absent)
    return tuple(cards)


def perceive(
    truth: TableState,
    stage: LoopStage,
    outcome: ShowdownOutcome,
    noise: NoiseProfile,
    rng: random.Random,
    uncertain: tuple[str, ...] = (),
) -> ParsedState:
    """Project the truth and independently corrupt each challenge field."""
    parsed = project_truth(truth, stage, outcome, uncertain)
    table = parsed.table
    flagged: list[str] = list(uncertain)

    def hit(field_name: str) -> bool:
        fire = rng.random() < noise.rate(field_name)
        if fire and noise.mark_uncertain:
            flagged.append(field_name)
        return fire

    if hit("LS"):
        parsed = replace(
            parsed, loop_stage=_wrong_choice(rng, list(LoopStage), parsed.loop_stage)
        )
    if hit("TO"):
        table = replace(table, is_my_turn=not table.is_my_turn)
    if hit("BI"):
        parsed = replace(
            parsed,
            blind=Blind.SMALL if parsed.blind == Blind.BIG else Blind.BIG,
        )
    if hit("CC"):
        table = replace(table, community_cards=_corrupt_board(table.community_cards, rng))
    if hit("CB"):
        if rng.random() < 0.5:
            table = replace(table, my_current_bet=_corrupt_chips(table.my_current_bet, rng))
        else:
            table = replace(table, opponent_bet=_corrupt_chips(table.opponent_bet, rng))
    if hit("RCI"):
        table = replace(table, my_chips=_corrupt_chips(table.my_chips, rng))
    if hit("OCI"):
        table = replace(table, opponent_chips=_corrupt_chips(table.opponent_chips, rng))
    if hit("SO"):
        parsed = replace(
            parsed,
            showdown_outcome=_wrong_choice(
                rng, list(ShowdownOutcome), parsed.showdown_outcome
            ),
        )

    table = replace(table, uncertain_fields=tuple(flagged))
    return replace(parsed, table=table)
