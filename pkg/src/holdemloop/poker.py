"""Heads-up hold'em legality and judgment over the tabletop state.

Covers 7-card hand evaluation, showdown judgment, the legal agent-action
set per state, street advancement, action registration, and pot
settlement. Betting is no-limit with chip granularity 5; raise targets
are total-bet values for the current street.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum, IntEnum

from . import translate as tr
from .tabletop import (
    Blind,
    Card,
    ChipCount,
    Facing,
    HoleSlot,
    Street,
    TableState,
    chip_value,
)


class DuplicateCardError(Exception):
    """The same card appears twice in one evaluation input."""


class WrongCardCountError(Exception):
    """Hand evaluation needs exactly seven cards."""


class IncompleteBoardError(Exception):
    """Showdown judgment needs a five-card board."""


class NotRobotTurnError(Exception):
    """A robot action set was queried while it is not the robot's turn."""


class BettingRoundOpenError(Exception):
    """Street advancement attempted with betting still open."""


class DeckExhaustedError(Exception):
    """Not enough cards left in the deck to deal."""


class AlreadySettledError(Exception):
    """Pot settlement attempted on an already settled hand."""


class ShowdownOutcome(str, Enum):
    """Showdown field of the parsed schema."""

    WIN = "win"
    LOSE = "lose"
    NOT_SHOWDOWN = "not_showdown"


class HandCategory(IntEnum):
    HIGH_CARD = 0
    PAIR = 1
    TWO_PAIR = 2
    TRIPS = 3
    STRAIGHT = 4
    FLUSH = 5
    FULL_HOUSE = 6
    QUADS = 7
    STRAIGHT_FLUSH = 8


@dataclass(frozen=True, order=True)
class HandRank:
    """Totally ordered rank of a best five-card hand."""

    category: HandCategory
    tiebreaks: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.category.name.lower()}{self.tiebreaks}"


def _straight_high(values: set[int]) -> int | None:
    """Highest straight top card in a value set, or None. Ace plays low."""
    vals = set(values)
    if 14 in vals:
        vals.add(1)
    for high in range(14, 4, -1):
        if all(v in vals for v in range(high - 4, high + 1)):
            return high
    return None


def evaluate_hand(cards: list[Card] | tuple[Card, ...]) -> HandRank:
    """Best five-card rank over all 21 subsets of a seven-card hand.

    Implemented by direct category analysis of the seven cards; the test
    suite checks it against an independent 21-subset brute-force oracle.
    """
    cards = list(cards)
    if len(cards) != 7:
        raise WrongCardCountError(f"need 7 cards, got {len(cards)}")
    if len(set(cards)) != 7:
        raise DuplicateCardError("duplicate card in evaluation input")

    values = sorted((c.value for c in cards), reverse=True)
    by_count: dict[int, list[int]] = {}
    for value, count in Counter(values).items():
        by_count.setdefault(count, []).append(value)
    for group in by_count.values():
        group.sort(reverse=True)

    suit_groups: dict[str, list[int]] = {}
    for c in cards:
        suit_groups.setdefault(c.suit, []).append(c.value)
    flush_values: list[int] | None = None
    for group in suit_groups.values():
        if len(group) >= 5:
            flush_values = sorted(group, reverse=True)

    if flush_values is not None:
        sf_high = _straight_high(set(flush_values))
        if sf_high is not None:
            return HandRank(HandCategory.STRAIGHT_FLUSH, (sf_high,))

    quads = by_count.get(4, [])
    if quads:
        q = quads[0]
        kicker = max(v for v in values if v != q)
        return HandRank(HandCategory.QUADS, (q, kicker))

    trips = by_count.get(3, [])
    pairs = by_count.get(2, [])
    if trips:
        t = trips[0]
        pair_pool = trips[1:] + pairs
        if pair_pool:
            return HandRank(HandCategory.FULL_HOUSE, (t, max(pair_pool)))

    if flush_values is not None:
        return HandRank(HandCategory.FLUSH, tuple(flush_values[:5]))

    straight_high = _straight_high(set(values))
    if straight_high is not None:
        return HandRank(HandCategory.STRAIGHT, (straight_high,))

    if trips:
        t = trips[0]
        kickers = [v for v in values if v != t][:2]
        return HandRank(HandCategory.TRIPS, (t, *kickers))

    if len(pairs) >= 2:
        p1, p2 = pairs[0], pairs[1]
        kicker = max(v for v in values if v != p1 and v != p2)
        return HandRank(HandCategory.TWO_PAIR, (p1, p2, kicker))

    if pairs:
        p = pairs[0]
        kickers = [v for v in values if v != p][:3]
        return HandRank(HandCategory.PAIR, (p, *kickers))

    return HandRank(HandCategory.HIGH_CARD, tuple(values[:5]))


def judge_showdown(
    robot_hole: list[Card] | tuple[Card, ...],
    opponent_hole: list[Card] | tuple[Card, ...],
    board: list[Card] | tuple[Card, ...],
) -> str:
    """Compare both seven-card hands: ``win``, ``lose``, or ``tie``."""
    if len(board) != 5:
        raise IncompleteBoardError(f"board has {len(board)} cards")
    all_cards = list(robot_hole) + list(opponent_hole) + list(board)
    if len(set(all_cards)) != 9:
        raise DuplicateCardError("duplicate card across holes and board")
    robot = evaluate_hand(list(robot_hole) + list(board))
    opponent = evaluate_hand(list(opponent_hole) + list(board))
    if robot > opponent:
        return "win"
    if robot < opponent:
        return "lose"
    return "tie"


# --- betting legality -------------------------------------------------

BETTING_STREETS = (Street.PREFLOP, Street.FLOP, Street.TURN, Street.RIVER)


def robot_blind_value(state: TableState) -> int:
    return state.small_blind if state.robot_blind == Blind.SMALL else state.big_blind


def opponent_blind_value(state: TableState) -> int:
    return state.big_blind if state.robot_blind == Blind.SMALL else state.small_blind


def outstanding(state: TableState) -> int:
    """Chip value the robot must add to match the opponent's street bet."""
    return max(0, state.opponent_street_bet - state.robot_street_bet)


def representable_deltas(inventory: ChipCount) -> set[int]:
    """All positive chip values assemblable from the inventory."""
    sums = {0}
    for denom, count in inventory:
        for _ in range(count):
            sums |= {s + denom for s in sums}
    sums.discard(0)
    return sums


def round_complete(state: TableState) -> bool:
    """Whether the current betting round is closed.

    An all-in player has no further action, so an empty stack satisfies
    the acted requirement and a short all-in closes the round with
    unequal bets.
    """
    if state.street not in BETTING_STREETS:
        return False
    if not (state.robot_blind_posted and state.opponent_blind_posted):
        return False
    robot_done = state.robot_acted or chip_value(state.robot_inventory) == 0
    opponent_done = state.opponent_acted or chip_value(state.opponent_inventory) == 0
    if not (robot_done and opponent_done):
        return False
    if state.robot_street_bet == state.opponent_street_bet:
        return True
    owing_inventory = (
        state.robot_inventory
        if state.robot_street_bet < state.opponent_street_bet
        else state.opponent_inventory
    )
    return chip_value(owing_inventory) == 0


def legal_actions(state: TableState) -> set[tr.AgentPrimitive]:
    """Agent primitives the robot may legally choose in ``state``.

    Raise targets enumerate every representable total for the street.
    On a settled hand the only possible action is collecting an
    uncollected pot; an empty set means the hand is over.
    """
    if not state.is_robot_turn:
        raise NotRobotTurnError("not the robot's turn")

    actions: set[tr.AgentPrimitive] = set()

    if state.street == Street.SETTLED:
        if chip_value(state.robot_bet) + chip_value(state.opponent_bet) > 0:
            actions.add(tr.collect_winnings())
        return actions

    for side, slot in (("L", state.hole_left), ("R", state.hole_right)):
        if slot is None:
            continue
        if slot.facing == Facing.IN_HAND:
            actions.add(tr.put_down_card(side, "down"))
            actions.add(tr.put_down_card(side, "up"))
        elif slot.facing == Facing.DOWN:
            if state.street == Street.SHOWDOWN:
                actions.add(tr.show_card(side))
            else:
                actions.add(tr.view_card(side))

    if state.street not in BETTING_STREETS:
        return actions

    inventory = state.robot_inventory
    deltas = representable_deltas(inventory)
    opponent_can_respond = chip_value(state.opponent_inventory) > 0

    if not state.robot_blind_posted:
        # the robot's opening chip action posts its blind (possibly more)
        blind = robot_blind_value(state)
        actions.add(tr.fold())
        if chip_value(inventory) > 0:
            actions.add(tr.all_in())
        for delta in deltas:
            if delta >= blind:
                actions.add(tr.raise_to(delta))
        return actions

    owed = outstanding(state)
    actions.add(tr.fold())  # always available in turn, however dominated
    if owed == 0:
        actions.add(tr.check())
    elif owed in deltas:
        actions.add(tr.call())
    if chip_value(inventory) > 0:
        actions.add(tr.all_in())
    if opponent_can_respond:
        for delta in deltas:
            target = state.robot_street_bet + delta
            if target > state.opponent_street_bet and target > state.robot_street_bet:
                actions.add(tr.raise_to(target))
    return actions


def opponent_legal_actions(state: TableState) -> set[tr.AgentPrimitive]:
    """Betting actions open to the opponent seat.

    The opponent has no card primitives to route: reveals happen
    instantly and folds are recognized by scene.
    """
    if state.street not in BETTING_STREETS or state.is_robot_turn:
        return set()
    actions: set[tr.AgentPrimitive] = set()
    inventory = state.opponent_inventory
    deltas = representable_deltas(inventory)
    owed = max(0, state.robot_street_bet - state.opponent_street_bet)
    actions.add(tr.fold())
    if owed == 0:
        actions.add(tr.check())
    elif owed in deltas:
        actions.add(tr.call())
    if chip_value(inventory) > 0:
        actions.add(tr.all_in())
    if chip_value(state.robot_inventory) > 0:
        for delta in deltas:
            target = state.opponent_street_bet + delta
            if target > state.robot_street_bet and target > state.opponent_street_bet:
                actions.add(tr.raise_to(target))
    return actions


# --- state transitions ------------------------------------------------


def _move_chips(src: ChipCount, dst: ChipCount, denoms: list[int]) -> tuple[ChipCount, ChipCount]:
    for d in denoms:
        src = src.with_delta(d, -1)
        dst = dst.with_delta(d, +1)
    return src, dst


def _post_opponent_blind(state: TableState) -> TableState:
    """Instantly move the opponent's blind into its bet zone.

    A stack too short to assemble the blind goes all-in for what it has.
    """
    blind = opponent_blind_value(state)
    try:
        denoms = tr.split_chips(blind, state.opponent_inventory)
    except tr.NotRepresentableError:
        denoms = _all_denoms(state.opponent_inventory)
        blind = sum(denoms)
    inv, bet = _move_chips(state.opponent_inventory, state.opponent_bet, denoms)
    return replace(
        state,
        opponent_inventory=inv,
        opponent_bet=bet,
        opponent_street_bet=state.opponent_street_bet + blind,
        opponent_blind_posted=True,
    )


def _all_denoms(chips: ChipCount) -> list[int]:
    out: list[int] = []
    for denom, count in chips:
        out.extend([denom] * count)
    return out


def _next_turn(state: TableState) -> TableState:
    """Recompute whose turn it is after an action registered."""
    if round_complete(state):
        return state
    if state.robot_street_bet != state.opponent_street_bet:
        robot_owes = state.robot_street_bet < state.opponent_street_bet
        return replace(state, is_robot_turn=robot_owes)
    if not state.opponent_acted:
        return replace(state, is_robot_turn=False)
    return replace(state, is_robot_turn=True)


def register_robot_bet(state: TableState, delta_value: int) -> TableState:
    """Book a completed robot chip push of ``delta_value`` street value.

    Chip motion already happened atom by atom; this updates the betting
    bookkeeping, posts the opponent's blind when the robot's own post
    lands, and recomputes the turn.
    """
    state = replace(
        state,
        robot_street_bet=state.robot_street_bet + delta_value,
        robot_acted=True,
        robot_blind_posted=True,
    )
    if not state.opponent_blind_posted and state.street == Street.PREFLOP:
        state = _post_opponent_blind(state)
    return _next_turn(state)


def register_robot_check(state: TableState) -> TableState:
    state = replace(state, robot_acted=True)
    return _next_turn(state)


def register_opponent_action(state: TableState, action: tr.AgentPrimitive) -> TableState:
    """Apply one opponent betting action with instant chip motion.

    The opponent's dexterity is not modeled; chips jump between its
    zones. Fold is not handled here (it settles the pot instead).
    """
    name = action.name
    if name == tr.AgentPrimitiveName.CHECK:
        state = replace(state, opponent_acted=True)
        return _next_turn(state)

    if name == tr.AgentPrimitiveName.CALL:
        delta = max(0, state.robot_street_bet - state.opponent_street_bet)
    elif name == tr.AgentPrimitiveName.RAISE:
        if action.amount is None:
            raise tr.IllegalPrimitiveError("opponent raise without an amount")
        delta = action.amount - state.opponent_street_bet
    elif name == tr.AgentPrimitiveName.ALL_IN:
        delta = chip_value(state.opponent_inventory)
    else:
        raise tr.IllegalPrimitiveError(f"not an opponent betting action: {action}")

    if delta > 0:
        denoms = tr.split_chips(delta, state.opponent_inventory)
        inv, bet = _move_chips(state.opponent_inventory, state.opponent_bet, denoms)
        state = replace(state, opponent_inventory=inv, opponent_bet=bet)
    state = replace(
        state,
        opponent_street_bet=state.opponent_street_bet + max(0, delta),
        opponent_acted=True,
        opponent_blind_posted=True,
    )
    return _next_turn(state)


_DEAL_COUNT = {Street.FLOP: 3, Street.TURN: 1, Street.RIVER: 1}
_NEXT_STREET = {
    Street.PREFLOP: Street.FLOP,
    Street.FLOP: Street.TURN,
    Street.TURN: Street.RIVER,
    Street.RIVER: Street.SHOWDOWN,
}


def advance_street(state: TableState) -> TableState:
    """Deal the next street and reset the betting round.

    Postflop the big blind acts first. When either stack is empty the
    new round is marked closed so the runout continues without betting.
    """
    if state.street not in _NEXT_STREET:
        raise BettingRoundOpenError(f"no next street from {state.street.value}")
    if not round_complete(state):
        raise BettingRoundOpenError("betting round still open")

    nxt = _NEXT_STREET[state.street]
    deal = _DEAL_COUNT.get(nxt, 0)
    if deal > len(state.deck):
        raise DeckExhaustedError("deck exhausted")
    board = state.community_cards + state.deck[:deal]
    deck = state.deck[deal:]

    robot_first = state.robot_blind == Blind.BIG
    state = replace(
        state,
        street=nxt,
        community_cards=board,
        deck=deck,
        robot_street_bet=0,
        opponent_street_bet=0,
        robot_acted=False,
        opponent_acted=False,
        is_robot_turn=robot_first if nxt in BETTING_STREETS else True,
    )
    if nxt in BETTING_STREETS and (
        chip_value(state.robot_inventory) == 0 or chip_value(state.opponent_inventory) == 0
    ):
        state = replace(state, robot_acted=True, opponent_acted=True)
    return state


def reveal_opponent_cards(state: TableState) -> TableState:
    """Flip the opponent's hole cards face up (instant at showdown)."""
    def up(slot: HoleSlot | None) -> HoleSlot | None:
        return replace(slot, facing=Facing.UP) if slot else None

    return replace(
        state,
        opponent_hole_left=up(state.opponent_hole_left),
        opponent_hole_right=up(state.opponent_hole_right),
    )


def settle_pot(state: TableState, result: str) -> TableState:
    """Settle the hand: ``win``, ``lose``, ``tie``, or ``opponent_folded``.

    On win or opponent fold the bet zones are left in place for the
    robot's pull primitives; on lose the opponent absorbs both zones
    instantly; on tie each side's own zone returns to its inventory.
    """
    if state.street == Street.SETTLED:
        raise AlreadySettledError("pot already settled")
    if result not in ("win", "lose", "tie", "opponent_folded"):
        raise ValueError(f"unknown settlement result: {result!r}")

    if result == "lose":
        gained = state.opponent_inventory.add(state.robot_bet).add(state.opponent_bet)
        state = replace(
            state,
            opponent_inventory=gained,
            robot_bet=ChipCount(),
            opponent_bet=ChipCount(),
        )
    elif result == "tie":
        state = replace(
            state,
            robot_inventory=state.robot_inventory.add(state.robot_bet),
            opponent_inventory=state.opponent_inventory.add(state.opponent_bet),
            robot_bet=ChipCount(),
            opponent_bet=ChipCount(),
        )
    return replace(state, street=Street.SETTLED, is_robot_turn=True)
