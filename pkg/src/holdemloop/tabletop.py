"""Ground-truth tabletop state: cards, chips, zones, markers, validation.

All types here are immutable value objects. Operations never mutate in
place; they return modified copies, so states can be snapshotted and
shared freely across the simulator.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator

RANKS = ("2", "3", "4", "5", "6", "7", "8", "9", "10", "J", "Q", "K", "A")
SUITS = ("C", "D", "H", "S")
RANK_VALUE = {rank: i + 2 for i, rank in enumerate(RANKS)}

DENOMINATIONS = (100, 50, 10, 5)  # descending, the dispatch order for chip atoms


class Facing(str, Enum):
    """Physical orientation of a hole card."""

    DOWN = "down"
    UP = "up"
    IN_HAND = "in_hand"


class Street(str, Enum):
    """Hand progression marker."""

    PREFLOP = "preflop"
    FLOP = "flop"
    TURN = "turn"
    RIVER = "river"
    SHOWDOWN = "showdown"
    SETTLED = "settled"


class LoopStage(str, Enum):
    """Seven-value session stage label driving the router."""

    ACTING = "acting"
    ATOM_IDLE = "atom_idle"
    IDLE = "idle"
    WIN = "win"
    LOSE = "lose"
    TO_RECOVER = "to_recover"
    DOWN = "down"


class OutcomeLevel(str, Enum):
    """Four-level execution outcome rubric for a dispatched robot atom.

    SP and DC are completions; SP alone leaves the scene usable.
    """

    SP = "SP"  # scene-preserving success
    DC = "DC"  # disruptive completion
    TF = "TF"  # task failure (retryable)
    DF = "DF"  # disruptive failure (needs reset)


class Blind(str, Enum):
    """Forced-bet assignment for the robot seat."""

    SMALL = "small_blind"
    BIG = "big_blind"


@dataclass(frozen=True, order=True)
class Card:
    """One of the 52 distinct playing cards."""

    rank: str
    suit: str

    def __post_init__(self) -> None:
        if self.rank not in RANKS or self.suit not in SUITS:
            raise ValueError(f"not a card: {self.rank!r}{self.suit!r}")

    @property
    def value(self) -> int:
        return RANK_VALUE[self.rank]

    @classmethod
    def parse(cls, text: str) -> "Card":
        """Parse compact notation like ``AS``, ``10H``, ``7D``."""
        rank, suit = text[:-1], text[-1:]
        return cls(rank, suit)

    def __str__(self) -> str:
        return f"{self.rank}{self.suit}"


def full_deck() -> list[Card]:
    """The 52 cards in a fixed reference order (suits within ranks)."""
    return [Card(rank, suit) for rank in RANKS for suit in SUITS]


def card(text: str) -> Card:
    """Shorthand constructor used heavily in tests and fixtures."""
    return Card.parse(text)


@dataclass(frozen=True)
class ChipCount:
    """Per-denomination chip counts for one zone.

    All four denominations are always present; zero counts allowed.
    """

    c5: int = 0
    c10: int = 0
    c50: int = 0
    c100: int = 0

    def __post_init__(self) -> None:
        for denom in DENOMINATIONS:
            if self.get(denom) < 0:
                raise ValueError(f"negative chip count for denomination {denom}")

    def get(self, denom: int) -> int:
        return {5: self.c5, 10: self.c10, 50: self.c50, 100: self.c100}[denom]

    def with_delta(self, denom: int, delta: int) -> "ChipCount":
        """A copy with ``delta`` added to one denomination count."""
        key = {5: "c5", 10: "c10", 50: "c50", 100: "c100"}[denom]
        return replace(self, **{key: self.get(denom) + delta})

    def add(self, other: "ChipCount") -> "ChipCount":
        return ChipCount(
            self.c5 + other.c5,
            self.c10 + other.c10,
            self.c50 + other.c50,
            self.c100 + other.c100,
        )

    def total_chips(self) -> int:
        return self.c5 + self.c10 + self.c50 + self.c100

    def to_doc(self) -> dict:
        return {"5": self.c5, "10": self.c10, "50": self.c50, "100": self.c100}

    @classmethod
    def from_doc(cls, doc: dict) -> "ChipCount":
        return cls(int(doc["5"]), int(doc["10"]), int(doc["50"]), int(doc["100"]))

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> "ChipCount":
        return cls(
            counts.get(5, 0), counts.get(10, 0), counts.get(50, 0), counts.get(100, 0)
        )

    def __iter__(self) -> Iterator[tuple[int, int]]:
        for denom in DENOMINATIONS:
            yield denom, self.get(denom)


def chip_value(chips: ChipCount) -> int:
    """Total chip value of a zone: sum of denomination times count."""
    return 5 * chips.c5 + 10 * chips.c10 + 50 * chips.c50 + 100 * chips.c100


ZERO_CHIPS = ChipCount()


@dataclass(frozen=True)
class HoleSlot:
    """One hole-card slot: the card occupying it plus its facing."""

    card: Card
    facing: Facing = Facing.DOWN

    def to_doc(self) -> dict:
        return {"card": str(self.card), "facing": self.facing.value}

    @classmethod
    def from_doc(cls, doc: dict) -> "HoleSlot":
        return cls(Card.parse(doc["card"]), Facing(doc["facing"]))


@dataclass(frozen=True)
class TableConfig:
    """Initial-hand configuration.

    Default chip stacks mirror the standard bench layout; blind sizes and
    stacks are overridable because the benchmark fixes neither beyond the
    reference example.
    """

    robot_chips: ChipCount = ChipCount(c5=4, c10=3, c50=3, c100=3)
    opponent_chips: ChipCount = ChipCount(c5=4, c10=4, c50=3, c100=3)
    robot_blind: Blind = Blind.BIG
    small_blind: int = 5
    big_blind: int = 10
    deck_seed: int = 0

    def to_doc(self) -> dict:
        return {
            "robot_chips": self.robot_chips.to_doc(),
            "opponent_chips": self.opponent_chips.to_doc(),
            "robot_blind": self.robot_blind.value,
            "small_blind": self.small_blind,
            "big_blind": self.big_blind,
            "deck_seed": self.deck_seed,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TableConfig":
        return cls(
            robot_chips=ChipCount.from_doc(doc.get("robot_chips", cls.robot_chips.to_doc())),
            opponent_chips=ChipCount.from_doc(
                doc.get("opponent_chips", cls.opponent_chips.to_doc())
            ),
            robot_blind=Blind(doc.get("robot_blind", cls.robot_blind.value)),
            small_blind=int(doc.get("small_blind", cls.small_blind)),
            big_blind=int(doc.get("big_blind", cls.big_blind)),
            deck_seed=int(doc.get("deck_seed", cls.deck_seed)),
        )


@dataclass(frozen=True)
class TableState:
    """Full ground truth of the tabletop at one instant."""

    deck: tuple[Card, ...]
    hole_left: HoleSlot | None
    hole_right: HoleSlot | None
    opponent_hole_left: HoleSlot | None
    opponent_hole_right: HoleSlot | None
    community_cards: tuple[Card, ...]
    robot_inventory: ChipCount
    opponent_inventory: ChipCount
    robot_bet: ChipCount
    opponent_bet: ChipCount
    robot_blind: Blind
    small_blind: int
    big_blind: int
    is_robot_turn: bool
    scene_stable: bool
    street: Street
    # betting bookkeeping: per-street bet values and action flags
    robot_street_bet: int = 0
    opponent_street_bet: int = 0
    robot_acted: bool = False
    opponent_acted: bool = False
    robot_blind_posted: bool = False
    opponent_blind_posted: bool = False

    def robot_hole_cards(self) -> list[Card]:
        return [slot.card for slot in (self.hole_left, self.hole_right) if slot]

    def opponent_hole_cards(self) -> list[Card]:
        return [
            slot.card
            for slot in (self.opponent_hole_left, self.opponent_hole_right)
            if slot
        ]

    def all_placed_cards(self) -> list[Card]:
        """Every card outside the deck (slots and board)."""
        return (
            self.robot_hole_cards()
            + self.opponent_hole_cards()
            + list(self.community_cards)
        )

    def to_doc(self) -> dict:
        def slot_doc(slot: HoleSlot | None) -> dict | None:
            return slot.to_doc() if slot else None

        return {
            "deck": [str(c) for c in self.deck],
            "hole_left": slot_doc(self.hole_left),
            "hole_right": slot_doc(self.hole_right),
            "opponent_hole_left": slot_doc(self.opponent_hole_left),
            "opponent_hole_right": slot_doc(self.opponent_hole_right),
            "community_cards": [str(c) for c in self.community_cards],
            "robot_inventory": self.robot_inventory.to_doc(),
            "opponent_inventory": self.opponent_inventory.to_doc(),
            "robot_bet": self.robot_bet.to_doc(),
            "opponent_bet": self.opponent_bet.to_doc(),
            "robot_blind": self.robot_blind.value,
            "small_blind": self.small_blind,
            "big_blind": self.big_blind,
            "is_robot_turn": self.is_robot_turn,
            "scene_stable": self.scene_stable,
            "street": self.street.value,
            "robot_street_bet": self.robot_street_bet,
            "opponent_street_bet": self.opponent_street_bet,
            "robot_acted": self.robot_acted,
            "opponent_acted": self.opponent_acted,
            "robot_blind_posted": self.robot_blind_posted,
            "opponent_blind_posted": self.opponent_blind_posted,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TableState":
        def slot(value: dict | None) -> HoleSlot | None:
            return HoleSlot.from_doc(value) if value else None

        return cls(
            deck=tuple(Card.parse(c) for c in doc["deck"]),
            hole_left=slot(doc["hole_left"]),
            hole_right=slot(doc["hole_right"]),
            opponent_hole_left=slot(doc["opponent_hole_left"]),
            opponent_hole_right=slot(doc["opponent_hole_right"]),
            community_cards=tuple(Card.parse(c) for c in doc["community_cards"]),
            robot_inventory=ChipCount.from_doc(doc["robot_inventory"]),
            opponent_inventory=ChipCount.from_doc(doc["opponent_inventory"]),
            robot_bet=ChipCount.from_doc(doc["robot_bet"]),
            opponent_bet=ChipCount.from_doc(doc["opponent_bet"]),
            robot_blind=Blind(doc["robot_blind"]),
            small_blind=int(doc["small_blind"]),
            big_blind=int(doc["big_blind"]),
            is_robot_turn=bool(doc["is_robot_turn"]),
            scene_stable=bool(doc["scene_stable"]),
            street=Street(doc["street"]),
            robot_street_bet=int(doc["robot_street_bet"]),
            opponent_street_bet=int(doc["opponent_street_bet"]),
            robot_acted=bool(doc["robot_acted"]),
            opponent_acted=bool(doc["opponent_acted"]),
            robot_blind_posted=bool(doc["robot_blind_posted"]),
            opponent_blind_posted=bool(doc["opponent_blind_posted"]),
        )


def new_initial_table(config: TableConfig | None = None) -> TableState:
    """Fresh preflop table: seeded deck, face-down holes, empty board.

    The deck permutation is a pure function of ``config.deck_seed``; both
    players' hole cards are dealt off the top (robot left, robot right,
    opponent left, opponent right).
    """
    cfg = config or TableConfig()
    rng = random.Random(cfg.deck_seed)
    deck = full_deck()
    rng.shuffle(deck)
    robot_l, robot_r, opp_l, opp_r = deck[:4]
    return TableState(
        deck=tuple(deck[4:]),
        hole_left=HoleSlot(robot_l, Facing.DOWN),
        hole_right=HoleSlot(robot_r, Facing.DOWN),
        opponent_hole_left=HoleSlot(opp_l, Facing.DOWN),
        opponent_hole_right=HoleSlot(opp_r, Facing.DOWN),
        community_cards=(),
        robot_inventory=cfg.robot_chips,
        opponent_inventory=cfg.opponent_chips,
        robot_bet=ZERO_CHIPS,
        opponent_bet=ZERO_CHIPS,
        robot_blind=cfg.robot_blind,
        small_blind=cfg.small_blind,
        big_blind=cfg.big_blind,
        is_robot_turn=True,
        scene_stable=True,
        street=Street.PREFLOP,
    )


@dataclass(frozen=True)
class Violation:
    """One broken invariant found by validate_state."""

    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def expected_totals(config: TableConfig) -> ChipCount:
    """Per-denomination chip total the table must conserve."""
    return config.robot_chips.add(config.opponent_chips)


def validate_state(state: TableState, totals: ChipCount) -> list[Violation]:
    """Check card uniqueness, chip conservation, and shape invariants.

    Returns an empty list when all invariants hold; violations are data,
    not exceptions.
    """
    violations: list[Violation] = []

    seen: set[Card] = set()
    for c in list(state.deck) + state.all_placed_cards():
        if c in seen:
            violations.append(Violation("CardDuplicated", str(c)))
        seen.add(c)

    zones = (state.robot_inventory, state.opponent_inventory, state.robot_bet, state.opponent_bet)
    for denom in DENOMINATIONS:
        present = sum(zone.get(denom) for zone in zones)
        if present != totals.get(denom):
            violations.append(
                Violation(
                    "ChipConservationBroken",
                    f"denomination {denom}: {present} present, {totals.get(denom)} expected",
                )
            )

    if len(state.community_cards) not in (0, 3, 4, 5):
        violations.append(
            Violation("CommunityCardCount", str(len(state.community_cards)))
        )

    if state.street == Street.PREFLOP and state.community_cards:
        violations.append(Violation("FlagInconsistent", "community cards before the flop"))

    return violations


def canonical_dumps(doc: dict | list, pretty: bool = False) -> str:
    """Serialize a document in the canonical text encoding.

    Key order is the order the ``to_doc`` builders produce; compact form
    is used for log lines and the wire, pretty form for files on disk.
    """
    if pretty:
        return json.dumps(doc, indent=2) + "\n"
    return json.dumps(doc, separators=(",", ":"))


def canonical_loads(text: str | bytes) -> dict | list:
    return json.loads(text)
