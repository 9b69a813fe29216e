"""Outcome sampling and atom effects on the ground truth."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from holdemloop.policy import (
    EffectInapplicableError,
    OutcomeProfile,
    apply_nominal_effect,
    execute_atom,
    sample_outcome,
    scene_stable_after,
)
from holdemloop.profiles import outcome_profile
from holdemloop.tabletop import (
    ChipCount,
    Facing,
    LoopStage,
    OutcomeLevel,
    TableConfig,
    expected_totals,
    new_initial_table,
    validate_state,
)
from holdemloop.translate import RobotAtom


class TestProfiles:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValueError):
            OutcomeProfile(default=(0.5, 0.5, 0.5, 0.0))

    def test_negative_probability_rejected(self):
        with pytest.raises(ValueError):
            OutcomeProfile(default=(1.2, -0.2, 0.0, 0.0))

    def test_doc_round_trip(self):
        profile = OutcomeProfile(
            name="x", default=(0.5, 0.25, 0.25, 0.0),
            per_primitive={"push_5": (1.0, 0.0, 0.0, 0.0)}, settle_delay=2,
        )
        assert OutcomeProfile.from_doc(profile.to_doc()) == profile


class TestSampleOutcome:
    def test_degenerate_profile_always_sp(self):
        rng = random.Random(1)
        profile = OutcomeProfile(default=(1.0, 0.0, 0.0, 0.0))
        assert all(
            sample_outcome("push_5", profile, rng) == OutcomeLevel.SP for _ in range(200)
        )

    def test_same_seed_same_sequence(self):
        profile = outcome_profile("rdt-aggregate")
        rng1, rng2 = random.Random(9), random.Random(9)
        seq1 = [sample_outcome("push_5", profile, rng1) for _ in range(50)]
        seq2 = [sample_outcome("push_5", profile, rng2) for _ in range(50)]
        assert seq1 == seq2

    def test_aggregate_frequencies_match_counts_within_three_se(self):
        # measured aggregate: 38/80 SP, 11/80 DC, 31/80 TF, 0 DF
        profile = outcome_profile("pi05-aggregate")
        rng = random.Random(123)
        n = 100_000
        draws = [sample_outcome("push_5", profile, rng) for _ in range(n)]
        for level, p in zip(
            (OutcomeLevel.SP, OutcomeLevel.DC, OutcomeLevel.TF, OutcomeLevel.DF),
            (38 / 80, 11 / 80, 31 / 80, 0.0),
        ):
            observed = sum(1 for d in draws if d == level) / n
            se = max((p * (1 - p) / n) ** 0.5, 1e-9)
            assert abs(observed - p) <= max(3 * se, 1e-9), level


def table_with_held_left():
    state = new_initial_table()
    return replace(state, hole_left=replace(state.hole_left, facing=Facing.IN_HAND))


class TestNominalEffects:
    def test_push_moves_one_chip_to_bet_zone(self):
        state = new_initial_table()
        after, stage = execute_atom(state, RobotAtom(3), OutcomeLevel.SP)
        assert after.robot_inventory.get(10) == state.robot_inventory.get(10) - 1
        assert after.robot_bet.get(10) == 1
        assert stage == LoopStage.ATOM_IDLE

    def test_pull_respects_designated_zone(self):
        state = replace(new_initial_table(), opponent_bet=ChipCount(c50=1))
        after, _ = execute_atom(state, RobotAtom(8, zone="opponent_bet"), OutcomeLevel.SP)
        assert after.opponent_bet.get(50) == 0
        assert after.robot_inventory.get(50) == state.robot_inventory.get(50) + 1

    def test_pick_up_then_show(self):
        state = new_initial_table()
        state, _ = execute_atom(state, RobotAtom(0), OutcomeLevel.SP)
        assert state.hole_left.facing == Facing.IN_HAND
        state, _ = execute_atom(state, RobotAtom(12), OutcomeLevel.SP)
        assert state.hole_left.facing == Facing.UP

    def test_put_down_returns_face_down(self):
        state, _ = execute_atom(table_with_held_left(), RobotAtom(10), OutcomeLevel.SP)
        assert state.hole_left.facing == Facing.DOWN

    def test_task_failure_leaves_state_untouched(self):
        state = new_initial_table()
        after, stage = execute_atom(state, RobotAtom(3), OutcomeLevel.TF)
        assert after == state
        assert stage == LoopStage.TO_RECOVER

    def test_disruptive_failure_goes_down(self):
        state = new_initial_table()
        after, stage = execute_atom(state, RobotAtom(3), OutcomeLevel.DF)
        assert after == state
        assert stage == LoopStage.DOWN

    def test_disruptive_completion_applies_effect_but_goes_down(self):
        state = new_initial_table()
        after, stage = execute_atom(state, RobotAtom(3), OutcomeLevel.DC)
        assert after.robot_bet.get(10) == 1
        assert stage == LoopStage.DOWN

    def test_dc_continuable_mode(self):
        state = new_initial_table()
        _, stage = execute_atom(state, RobotAtom(3), OutcomeLevel.DC, dc_continuable=True)
        assert stage == LoopStage.ATOM_IDLE
        assert scene_stable_after(OutcomeLevel.DC, dc_continuable=True)

    def test_inapplicable_effect_is_an_error_not_an_outcome(self):
        state = replace(new_initial_table(), robot_inventory=ChipCount())
        with pytest.raises(EffectInapplicableError):
            apply_nominal_effect(state, RobotAtom(2))

    def test_sp_execution_of_a_chip_plan_moves_exactly_the_delta(self):
        from holdemloop.tabletop import chip_value
        from holdemloop.translate import DONE, next_atom, raise_to, translate

        state = new_initial_table()
        plan = translate(raise_to(165), state)  # 100 + 50 + 10 + 5
        before = chip_value(state.robot_bet)
        while True:
            step, plan = next_atom(plan)
            if step is DONE:
                break
            state, _ = execute_atom(state, step, OutcomeLevel.SP)
        assert chip_value(state.robot_bet) - before == 165

    def test_chip_conservation_across_all_outcomes(self):
        cfg = TableConfig()
        totals = expected_totals(cfg)
        rng = random.Random(4)
        state = new_initial_table(cfg)
        atoms = [RobotAtom(i) for i in (2, 3, 4, 5)]
        for _ in range(200):
            atom = rng.choice(atoms)
            level = rng.choice(list(OutcomeLevel))
            try:
                state, _ = execute_atom(state, atom, level)
            except EffectInapplicableError:
                state = new_initial_table(cfg)
                continue
            broken = [
                v for v in validate_state(state, totals) if v.kind == "ChipConservationBroken"
            ]
            assert broken == []
