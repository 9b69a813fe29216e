"""Tabletop state model: cards, chips, construction, validation, encoding."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from holdemloop.tabletop import (
    ChipCount,
    Facing,
    HoleSlot,
    Street,
    TableConfig,
    TableState,
    canonical_dumps,
    card,
    chip_value,
    expected_totals,
    full_deck,
    new_initial_table,
    validate_state,
)


class TestCards:
    def test_deck_has_52_distinct_cards(self):
        deck = full_deck()
        assert len(deck) == 52
        assert len(set(deck)) == 52

    @pytest.mark.parametrize("text", ["AS", "10H", "2C", "KD", "QH", "JC"])
    def test_parse_round_trip(self, text):
        assert str(card(text)) == text

    @pytest.mark.parametrize("text", ["1S", "AX", "S", "11H"])
    def test_bad_cards_rejected(self, text):
        with pytest.raises(ValueError):
            card(text)

    def test_rank_values_ordered(self):
        assert card("2C").value == 2
        assert card("10C").value == 10
        assert card("AC").value == 14


class TestChipCount:
    def test_zero_value(self):
        assert chip_value(ChipCount()) == 0

    def test_hand_arithmetic_values(self):
        assert chip_value(ChipCount(c5=1, c100=1)) == 105
        assert chip_value(ChipCount(c5=4, c10=3, c50=3, c100=3)) == 500

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ChipCount(c5=-1)

    def test_doc_round_trip(self):
        chips = ChipCount(c5=2, c10=0, c50=1, c100=3)
        doc = chips.to_doc()
        assert list(doc) == ["5", "10", "50", "100"]
        assert ChipCount.from_doc(doc) == chips


class TestNewInitialTable:
    def test_default_config_matches_reference_layout(self):
        state = new_initial_table()
        assert state.robot_inventory == ChipCount(c5=4, c10=3, c50=3, c100=3)
        assert state.opponent_inventory == ChipCount(c5=4, c10=4, c50=3, c100=3)
        assert chip_value(state.robot_bet) == 0
        assert chip_value(state.opponent_bet) == 0
        assert state.street == Street.PREFLOP
        assert state.community_cards == ()
        assert state.scene_stable and state.is_robot_turn

    def test_hole_cards_dealt_face_down(self):
        state = new_initial_table()
        for slot in (
            state.hole_left,
            state.hole_right,
            state.opponent_hole_left,
            state.opponent_hole_right,
        ):
            assert slot is not None and slot.facing == Facing.DOWN
        assert len(state.deck) == 48

    def test_zero_chip_config(self):
        cfg = TableConfig(robot_chips=ChipCount(), opponent_chips=ChipCount())
        state = new_initial_table(cfg)
        for zone in (
            state.robot_inventory,
            state.opponent_inventory,
            state.robot_bet,
            state.opponent_bet,
        ):
            assert chip_value(zone) == 0

    def test_same_seed_same_deck(self):
        a = new_initial_table(TableConfig(deck_seed=11))
        b = new_initial_table(TableConfig(deck_seed=11))
        assert a.deck == b.deck and a.hole_left == b.hole_left

    def test_different_seeds_differ(self):
        a = new_initial_table(TableConfig(deck_seed=1))
        b = new_initial_table(TableConfig(deck_seed=2))
        assert a.deck != b.deck


class TestValidateState:
    def test_fresh_table_is_clean(self):
        cfg = TableConfig()
        state = new_initial_table(cfg)
        assert validate_state(state, expected_totals(cfg)) == []

    def test_duplicate_card_reported(self):
        cfg = TableConfig()
        state = new_initial_table(cfg)
        dup = state.hole_left.card
        deck = tuple(c for c in state.deck if c not in (card("2C"), card("3C")))[:46]
        broken = replace(state, deck=deck, community_cards=(dup, card("2C"), card("3C")))
        kinds = {v.kind for v in validate_state(broken, expected_totals(cfg))}
        assert "CardDuplicated" in kinds

    def test_chip_conservation_break_reported(self):
        cfg = TableConfig()
        state = new_initial_table(cfg)
        broken = replace(state, robot_inventory=state.robot_inventory.with_delta(100, -1))
        violations = validate_state(broken, expected_totals(cfg))
        assert any(v.kind == "ChipConservationBroken" and "100" in v.detail for v in violations)

    def test_bad_community_length_reported(self):
        cfg = TableConfig()
        state = new_initial_table(cfg)
        broken = replace(
            state,
            deck=state.deck[2:],
            community_cards=tuple(state.deck[:2]),
            street=Street.FLOP,
        )
        kinds = {v.kind for v in validate_state(broken, expected_totals(cfg))}
        assert "CommunityCardCount" in kinds


class TestSerialization:
    def test_table_state_round_trips_byte_for_byte(self):
        for seed in range(20):
            state = new_initial_table(TableConfig(deck_seed=seed))
            doc = state.to_doc()
            encoded = canonical_dumps(doc)
            again = canonical_dumps(TableState.from_doc(doc).to_doc())
            assert encoded == again
            assert TableState.from_doc(doc) == state

    def test_hole_slot_round_trip(self):
        rng = random.Random(5)
        for _ in range(30):
            slot = HoleSlot(rng.choice(full_deck()), rng.choice(list(Facing)))
            assert HoleSlot.from_doc(slot.to_doc()) == slot

    def test_config_round_trip(self):
        cfg = TableConfig(deck_seed=9, small_blind=5, big_blind=10)
        assert TableConfig.from_doc(cfg.to_doc()) == cfg
