"""Hand evaluation, showdown judgment, legality, streets, settlement."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from oracles import brute_force_seven_rank
from holdemloop.poker import (
    AlreadySettledError,
    BettingRoundOpenError,
    DuplicateCardError,
    HandCategory,
    NotRobotTurnError,
    WrongCardCountError,
    advance_street,
    evaluate_hand,
    judge_showdown,
    legal_actions,
    opponent_legal_actions,
    register_opponent_action,
    register_robot_bet,
    register_robot_check,
    round_complete,
    settle_pot,
)
from holdemloop.tabletop import (
    Blind,
    ChipCount,
    Street,
    TableConfig,
    card,
    chip_value,
    expected_totals,
    full_deck,
    new_initial_table,
    validate_state,
)
from holdemloop.translate import (
    AgentPrimitiveName,
    check,
    raise_to,
    show_card,
)


def cards(*texts):
    return [card(t) for t in texts]


class TestEvaluateHand:
    def test_royal_flush_dominates(self):
        rank = evaluate_hand(cards("AS", "KS", "QS", "JS", "10S", "2D", "3C"))
        assert rank.category == HandCategory.STRAIGHT_FLUSH
        assert rank.tiebreaks == (14,)

    def test_quads_with_best_kicker(self):
        rank = evaluate_hand(cards("2C", "2D", "2H", "2S", "9D", "3C", "4C"))
        assert rank.category == HandCategory.QUADS
        assert rank.tiebreaks == (2, 9)

    def test_wheel_straight(self):
        rank = evaluate_hand(cards("AS", "2D", "3H", "4C", "5S", "9D", "KC"))
        assert rank.category == HandCategory.STRAIGHT
        assert rank.tiebreaks == (5,)

    def test_wrong_count_rejected(self):
        with pytest.raises(WrongCardCountError):
            evaluate_hand(cards("AS", "KS", "QS", "JS", "10S"))

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateCardError):
            evaluate_hand(cards("AS", "AS", "QS", "JS", "10S", "2D", "3C"))

    def test_matches_brute_force_oracle_on_seeded_draws(self):
        rng = random.Random(42)
        deck = full_deck()
        for _ in range(2000):
            draw = rng.sample(deck, 7)
            ours = evaluate_hand(draw)
            assert (int(ours.category), *ours.tiebreaks) == brute_force_seven_rank(draw)


class TestJudgeShowdown:
    BOARD = ("2C", "7D", "9H", "JS", "3C")

    def test_overpair_wins(self):
        assert judge_showdown(cards("AS", "AD"), cards("KS", "KD"), cards(*self.BOARD)) == "win"

    def test_board_plays_ties(self):
        board = cards("AS", "KD", "QH", "JC", "10S")
        assert judge_showdown(cards("2C", "3D"), cards("2H", "3S"), board) == "tie"

    def test_quad_aces_lose_case(self):
        board = cards("AC", "AH", "KD", "KC", "QS")
        assert judge_showdown(cards("2C", "3C"), cards("AS", "AD"), board) == "lose"

    def test_incomplete_board_rejected(self):
        from holdemloop.poker import IncompleteBoardError

        with pytest.raises(IncompleteBoardError):
            judge_showdown(cards("AS", "AD"), cards("KS", "KD"), cards("2C", "7D"))

    def test_antisymmetry_on_seeded_swaps(self):
        rng = random.Random(7)
        deck = full_deck()
        flip = {"win": "lose", "lose": "win", "tie": "tie"}
        for _ in range(500):
            draw = rng.sample(deck, 9)
            a, b, board = draw[:2], draw[2:4], draw[4:]
            assert judge_showdown(b, a, board) == flip[judge_showdown(a, b, board)]


def betting_state(**overrides):
    """Preflop state with both blinds posted, robot to act."""
    state = new_initial_table(TableConfig(robot_blind=Blind.SMALL))
    state = replace(
        state,
        robot_blind_posted=True,
        opponent_blind_posted=True,
        robot_acted=True,
        opponent_acted=False,
        robot_street_bet=10,
        opponent_street_bet=10,
        robot_inventory=ChipCount(c5=4, c10=2, c50=3, c100=3),
        opponent_inventory=ChipCount(c5=4, c10=3, c50=3, c100=3),
        robot_bet=ChipCount(c10=1),
        opponent_bet=ChipCount(c10=1),
        is_robot_turn=True,
    )
    return replace(state, **overrides)


class TestLegalActions:
    def test_equal_bets_offer_check_and_raise_not_call(self):
        actions = legal_actions(betting_state())
        names = {a.name for a in actions}
        assert AgentPrimitiveName.CHECK in names
        assert AgentPrimitiveName.RAISE in names
        assert AgentPrimitiveName.CALL not in names

    def test_short_stack_facing_big_bet_gets_all_in_and_fold(self):
        state = betting_state(
            robot_street_bet=0,
            opponent_street_bet=200,
            robot_inventory=ChipCount(c50=3),  # value 150
            robot_bet=ChipCount(),
            opponent_bet=ChipCount(c100=2),
            opponent_inventory=ChipCount(c5=4, c10=3, c50=3, c100=1),
        )
        actions = legal_actions(state)
        names = {a.name for a in actions}
        assert AgentPrimitiveName.ALL_IN in names
        assert AgentPrimitiveName.FOLD in names
        assert AgentPrimitiveName.CALL not in names
        assert AgentPrimitiveName.RAISE not in names
        assert AgentPrimitiveName.CHECK not in names  # never check facing a bet

    def test_showdown_face_down_cards_offer_shows(self):
        state = betting_state(street=Street.SHOWDOWN)
        actions = legal_actions(state)
        assert show_card("L") in actions
        assert show_card("R") in actions

    def test_not_robot_turn_raises(self):
        with pytest.raises(NotRobotTurnError):
            legal_actions(betting_state(is_robot_turn=False))

    def test_unposted_blind_requires_post(self):
        state = new_initial_table(TableConfig(robot_blind=Blind.SMALL))
        actions = legal_actions(state)
        names = {a.name for a in actions}
        assert AgentPrimitiveName.CHECK not in names
        assert AgentPrimitiveName.CALL not in names
        assert raise_to(5) in actions and raise_to(10) in actions
        assert all(a.amount >= 5 for a in actions if a.name == AgentPrimitiveName.RAISE)

    def test_raise_targets_are_representable_multiples(self):
        state = betting_state(robot_inventory=ChipCount(c100=2))
        targets = {a.amount for a in legal_actions(state) if a.name == AgentPrimitiveName.RAISE}
        assert targets == {110, 210}  # street bet 10 plus 100 or 200

    def test_settled_street_offers_only_collection(self):
        state = betting_state(street=Street.SETTLED)
        actions = legal_actions(state)
        assert {a.name for a in actions} == {AgentPrimitiveName.COLLECT_WINNINGS}
        empty = replace(state, robot_bet=ChipCount(), opponent_bet=ChipCount())
        assert legal_actions(empty) == set()


class TestStreets:
    def test_flop_deals_three(self):
        state = betting_state(robot_acted=True, opponent_acted=True)
        nxt = advance_street(state)
        assert nxt.street == Street.FLOP
        assert len(nxt.community_cards) == 3
        assert len(nxt.deck) == len(state.deck) - 3

    def test_river_to_showdown_deals_nothing(self):
        state = betting_state(
            street=Street.RIVER, robot_acted=True, opponent_acted=True,
            community_cards=tuple(new_initial_table().deck[:5]),
        )
        state = replace(state, deck=state.deck[5:])
        nxt = advance_street(state)
        assert nxt.street == Street.SHOWDOWN
        assert len(nxt.community_cards) == 5

    def test_same_seed_same_board(self):
        a = advance_street(betting_state(robot_acted=True, opponent_acted=True))
        b = advance_street(betting_state(robot_acted=True, opponent_acted=True))
        assert a.community_cards == b.community_cards

    def test_open_round_rejected(self):
        with pytest.raises(BettingRoundOpenError):
            advance_street(betting_state(opponent_acted=False))

    def test_postflop_first_to_act_is_big_blind(self):
        small = advance_street(betting_state(robot_acted=True, opponent_acted=True))
        assert small.is_robot_turn is False  # robot posted small blind
        big_state = betting_state(robot_acted=True, opponent_acted=True, robot_blind=Blind.BIG)
        assert advance_street(big_state).is_robot_turn is True


class TestRegistration:
    def test_robot_post_triggers_opponent_blind(self):
        state = new_initial_table(TableConfig(robot_blind=Blind.SMALL))
        state = replace(
            state,
            robot_inventory=state.robot_inventory.with_delta(10, -1),
            robot_bet=state.robot_bet.with_delta(10, +1),
        )
        state = register_robot_bet(state, 10)
        assert state.opponent_blind_posted
        assert state.opponent_street_bet == 10
        assert chip_value(state.opponent_bet) == 10
        assert state.is_robot_turn is False  # big blind option

    def test_check_check_closes_round(self):
        state = betting_state()
        state = register_robot_check(state)
        assert state.is_robot_turn is False
        state = register_opponent_action(state, check())
        assert round_complete(state)

    def test_opponent_raise_moves_chips_instantly(self):
        state = betting_state(is_robot_turn=False, opponent_acted=False)
        before = chip_value(state.opponent_inventory)
        state = register_opponent_action(state, raise_to(60))
        assert state.opponent_street_bet == 60
        assert chip_value(state.opponent_inventory) == before - 50
        assert state.is_robot_turn is True


class TestSettlePot:
    def test_lose_transfers_both_zones(self):
        state = betting_state()
        settled = settle_pot(state, "lose")
        assert chip_value(settled.robot_bet) == 0
        assert chip_value(settled.opponent_bet) == 0
        assert (
            chip_value(settled.opponent_inventory)
            == chip_value(state.opponent_inventory) + 20
        )

    def test_tie_restores_inventories(self):
        state = betting_state()
        settled = settle_pot(state, "tie")
        assert settled.robot_inventory == state.robot_inventory.add(state.robot_bet)
        assert settled.opponent_inventory == state.opponent_inventory.add(state.opponent_bet)

    def test_win_leaves_zones_for_pulls(self):
        state = betting_state()
        settled = settle_pot(state, "win")
        assert settled.robot_bet == state.robot_bet
        assert settled.opponent_bet == state.opponent_bet
        assert settled.street == Street.SETTLED

    def test_double_settle_rejected(self):
        settled = settle_pot(betting_state(), "win")
        with pytest.raises(AlreadySettledError):
            settle_pot(settled, "lose")

    def test_settlement_conserves_chips(self):
        cfg = TableConfig(robot_blind=Blind.SMALL)
        totals = expected_totals(cfg)
        for result in ("win", "lose", "tie", "opponent_folded"):
            settled = settle_pot(betting_state(), result)
            chips = [
                v
                for v in validate_state(settled, totals)
                if v.kind == "ChipConservationBroken"
            ]
            assert chips == [], result


class TestOpponentLegal:
    def test_owing_opponent_gets_call_and_fold(self):
        state = betting_state(is_robot_turn=False, robot_street_bet=60, opponent_acted=False)
        names = {a.name for a in opponent_legal_actions(state)}
        assert AgentPrimitiveName.CALL in names
        assert AgentPrimitiveName.FOLD in names
        assert AgentPrimitiveName.CHECK not in names

    def test_robot_turn_has_no_opponent_actions(self):
        assert opponent_legal_actions(betting_state()) == set()
