"""Stochastic stand-in for the learned dexterous policy.

Each dispatched robot atom draws one of the four outcome levels from a
configurable per-primitive profile, then applies (or withholds) the
atom's nominal effect on the ground-truth table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .tabletop import Facing, HoleSlot, LoopStage, OutcomeLevel, TableState
from .translate import PRIMITIVE_BY_ID, RobotAtom


class EffectInapplicableError(Exception):
    """The atom's nominal effect cannot apply to this table state.

    Distinct from a sampled task failure: this is a caller bug or an
    impossible scene, not a simulated policy outcome.
    """


Quad = tuple[float, float, float, float]  # (p_SP, p_DC, p_TF, p_DF)

ALWAYS_SP: Quad = (1.0, 0.0, 0.0, 0.0)


def _check_quad(quad: Quad) -> Quad:
    if len(quad) != 4 or any(p < 0 for p in quad):
        raise ValueError(f"bad outcome quadruple: {quad}")
    if abs(sum(quad) - 1.0) > 1e-9:
        raise ValueError(f"outcome quadruple does not sum to 1: {quad}")
    return quad


@dataclass(frozen=True)
class OutcomeProfile:
    """Per-primitive outcome distribution plus the scene settle delay."""

    name: str = "always-sp"
    default: Quad = ALWAYS_SP
    per_primitive: dict[str, Quad] = field(default_factory=dict)
    settle_delay: int = 1

    def __post_init__(self) -> None:
        _check_quad(self.default)
        for quad in self.per_primitive.values():
            _check_quad(quad)

    def quad_for(self, primitive_name: str) -> Quad:
        return self.per_primitive.get(primitive_name, self.default)

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "default": list(self.default),
            "per_primitive": {k: list(v) for k, v in sorted(self.per_primitive.items())},
            "settle_delay": self.settle_delay,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "OutcomeProfile":
        return cls(
            name=doc.get("name", "unnamed"),
            default=tuple(doc.get("default", ALWAYS_SP)),  # type: ignore[arg-type]
            per_primitive={k: tuple(v) for k, v in doc.get("per_primitive", {}).items()},  # type: ignore[misc]
            settle_delay=int(doc.get("settle_delay", 1)),
        )


_LEVELS = (OutcomeLevel.SP, OutcomeLevel.DC, OutcomeLevel.TF, OutcomeLevel.DF)


def sample_outcome(
    primitive_name: str, profile: OutcomeProfile, rng: random.Random
) -> OutcomeLevel:
    """Draw one outcome level; the rng advances deterministically."""
    quad = profile.quad_for(primitive_name)
    roll = rng.random()
    acc = 0.0
    for level, p in zip(_LEVELS, quad):
        acc += p
        if roll < acc:
            return level
    return OutcomeLevel.DF  # numerical tail


def _slot_for(state: TableState, side: str) -> HoleSlot | None:
    return state.hole_left if side == "L" else state.hole_right


def _with_slot(state: TableState, side: str, slot: HoleSlot) -> TableState:
    if side == "L":
        return replace(state, hole_left=slot)
    return replace(state, hole_right=slot)


def apply_nominal_effect(state: TableState, atom: RobotAtom) -> TableState:
    """Apply the atom's nominal table effect, or raise EffectInapplicable."""
    name = PRIMITIVE_BY_ID[atom.primitive_id].name

    if name in ("pick_up_left", "pick_up_right"):
        side = "L" if name.endswith("left") else "R"
        slot = _slot_for(state, side)
        if slot is None or slot.facing == Facing.IN_HAND:
            raise EffectInapplicableError(f"{name}: no card on the {side} slot")
        return _with_slot(state, side, replace(slot, facing=Facing.IN_HAND))

    if name in ("put_down_left", "put_down_right"):
        side = "L" if name.endswith("left") else "R"
        slot = _slot_for(state, side)
        if slot is None or slot.facing != Facing.IN_HAND:
            raise EffectInapplicableError(f"{name}: no held card for the {side} slot")
        return _with_slot(state, side, replace(slot, facing=Facing.DOWN))

    if name in ("show_left", "show_right"):
        side = "L" if name.endswith("left") else "R"
        slot = _slot_for(state, side)
        if slot is None or slot.facing != Facing.IN_HAND:
            raise EffectInapplicableError(f"{name}: no held card for the {side} slot")
        return _with_slot(state, side, replace(slot, facing=Facing.UP))

    if name.startswith("push_"):
        denom = int(name.split("_")[1])
        if state.robot_inventory.get(denom) < 1:
            raise EffectInapplicableError(f"{name}: no {denom}-chip in the inventory")
        return replace(
            state,
            robot_inventory=state.robot_inventory.with_delta(denom, -1),
            robot_bet=state.robot_bet.with_delta(denom, +1),
        )

    if name.startswith("pull_"):
        denom = int(name.split("_")[1])
        zone = atom.zone
        if zone is None:
            zone = "robot_bet" if state.robot_bet.get(denom) > 0 else "opponent_bet"
        source = state.robot_bet if zone == "robot_bet" else state.opponent_bet
        if source.get(denom) < 1:
            raise EffectInapplicableError(f"{name}: no {denom}-chip in {zone}")
        updated = source.with_delta(denom, -1)
        kwargs = {zone: updated}
        return replace(
            state,
            robot_inventory=state.robot_inventory.with_delta(denom, +1),
            **kwargs,
        )

    raise EffectInapplicableError(f"unknown atom {atom.primitive_id}")


_STAGE_AFTER = {
    OutcomeLevel.SP: LoopStage.ATOM_IDLE,
    OutcomeLevel.DC: LoopStage.DOWN,
    OutcomeLevel.TF: LoopStage.TO_RECOVER,
    OutcomeLevel.DF: LoopStage.DOWN,
}


def execute_atom(
    state: TableState,
    atom: RobotAtom,
    outcome: OutcomeLevel,
    dc_continuable: bool = False,
) -> tuple[TableState, LoopStage]:
    """Apply one sampled atom outcome to the truth.

    Completions (SP, DC) apply the nominal effect; failures (TF, DF)
    leave the table untouched. The returned stage is the post-settle
    loop stage; ``dc_continuable`` downgrades a disruptive completion
    from ``down`` to ``atom_idle`` for sensitivity studies.
    """
    if outcome in (OutcomeLevel.SP, OutcomeLevel.DC):
        state = apply_nominal_effect(state, atom)
    stage = _STAGE_AFTER[outcome]
    if outcome == OutcomeLevel.DC and dc_continuable:
        stage = LoopStage.ATOM_IDLE
    return state, stage


def scene_stable_after(outcome: OutcomeLevel, dc_continuable: bool = False) -> bool:
    """Whether the scene settles back to stable after this outcome."""
    if outcome == OutcomeLevel.DC:
        return dc_continuable
    return outcome in (OutcomeLevel.SP, OutcomeLevel.TF)
