"""Rule-based per-state router.

Maps one parsed state plus the session context to exactly one gate,
through a fixed precedence: termination, human escalation, retryable
recovery, the three wait branches, post-atom verification, plan
completion and continuation, the forced first view of a fresh game,
and finally agent invocation at decision states. The router encodes
the workflow constraints that need no agent reasoning.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .perceive import ParsedState, parsed_schema_problems
from .tabletop import LoopStage, chip_value
from .translate import AgentPrimitive, AtomPlan, RobotAtom, collect_winnings, view_card


class SchemaInvalidError(Exception):
    """The parsed state fails schema validation."""


class StaleContextError(Exception):
    """A gate was applied to a context generation it was not routed for."""


class GateKind(str, Enum):
    WAIT = "wait"
    VERIFY = "verify"
    COMPLETE = "complete"
    CONTINUE_ATOM = "continue_atom"
    RECOVER_RETRY = "recover_retry"
    INVOKE_AGENT = "invoke_agent"
    REQUEST_HUMAN = "request_human"
    TERMINATE = "terminate"


WAIT_REASONS = ("scene", "acting", "turn")


@dataclass(frozen=True)
class Gate:
    """The router's decision for one captured state."""

    kind: GateKind
    reason: str | None = None  # wait reason or escalation reason
    legal: frozenset[AgentPrimitive] | None = None
    forced: AgentPrimitive | None = None  # router-chosen primitive, no agent query
    outcome: str | None = None  # terminate outcome
    generation: int = 0

    def to_doc(self) -> dict:
        doc: dict = {"kind": self.kind.value}
        if self.reason:
            doc["reason"] = self.reason
        if self.forced:
            doc["forced"] = self.forced.label()
        if self.outcome:
            doc["outcome"] = self.outcome
        return doc


@dataclass(frozen=True)
class Budgets:
    """Escalation budgets; neither is pinned by the benchmark."""

    wait_budget: int = 4  # consecutive waits before human help
    retry_budget: int = 1  # retries per failed atom


@dataclass(frozen=True)
class SessionContext:
    """Router-side memory carried between captured states."""

    plan: AtomPlan | None = None
    pending_atom: RobotAtom | None = None
    awaiting_verify: bool = False
    wait_streak: int = 0
    retry_count: int = 0  # retries spent on the pending atom
    fresh_game: bool = True
    viewed_left: bool = False
    viewed_right: bool = False
    human_requested: bool = False
    terminated: bool = False
    termination_outcome: str | None = None
    generation: int = 0

    @property
    def plan_pending(self) -> bool:
        return self.plan is not None


@dataclass(frozen=True)
class GateEvent:
    """What the session actually did under a gate; feeds apply_gate."""

    new_plan: AtomPlan | None = None
    dispatched_atom: RobotAtom | None = None
    viewed_side: str | None = None


def route(
    ps: ParsedState,
    ctx: SessionContext,
    budgets: Budgets = Budgets(),
    legal: frozenset[AgentPrimitive] | None = None,
) -> Gate:
    """Decide exactly one gate for a schema-valid parsed state.

    ``legal`` is the caller-supplied action set embedded into an
    invoke_agent gate; the router itself never computes table legality.
    """
    problems = parsed_schema_problems(ps.to_doc())
    if problems:
        raise SchemaInvalidError("; ".join(problems))

    gen = ctx.generation
    stage = ps.loop_stage
    settled = (
        chip_value(ps.table.my_current_bet) + chip_value(ps.table.opponent_bet) == 0
    )

    # 1. termination
    if ctx.terminated:
        return Gate(GateKind.TERMINATE, outcome=ctx.termination_outcome, generation=gen)
    if ctx.human_requested:
        return Gate(GateKind.TERMINATE, outcome="aborted", generation=gen)
    if stage == LoopStage.LOSE:
        return Gate(GateKind.TERMINATE, outcome="lose", generation=gen)
    if stage == LoopStage.WIN and settled:
        return Gate(GateKind.TERMINATE, outcome="win", generation=gen)

    # 2. human escalation
    if stage == LoopStage.DOWN:
        return Gate(GateKind.REQUEST_HUMAN, reason="down", generation=gen)
    if ctx.wait_streak >= budgets.wait_budget:
        return Gate(GateKind.REQUEST_HUMAN, reason="wait_budget", generation=gen)

    # 3. retryable recovery
    if stage == LoopStage.TO_RECOVER:
        if ctx.retry_count < budgets.retry_budget and ctx.pending_atom is not None:
            return Gate(GateKind.RECOVER_RETRY, generation=gen)
        return Gate(GateKind.REQUEST_HUMAN, reason="retry_budget", generation=gen)

    # 4. waiting
    if stage == LoopStage.ACTING:
        return Gate(GateKind.WAIT, reason="acting", generation=gen)
    if not ps.table.scene_stable:
        return Gate(GateKind.WAIT, reason="scene", generation=gen)
    if not ps.table.is_my_turn and not ctx.plan_pending:
        return Gate(GateKind.WAIT, reason="turn", generation=gen)

    # 5. verification, then completion
    if ctx.awaiting_verify:
        return Gate(GateKind.VERIFY, generation=gen)
    if ctx.plan is not None and ctx.plan.complete:
        return Gate(GateKind.COMPLETE, generation=gen)

    # 6. continuation of a pending multi-atom translation
    if ctx.plan is not None:
        return Gate(GateKind.CONTINUE_ATOM, generation=gen)

    # 7. forced first action of a fresh game
    if ctx.fresh_game and stage in (LoopStage.IDLE, LoopStage.ATOM_IDLE):
        if not ctx.viewed_left:
            forced = view_card("L")
            return Gate(
                GateKind.INVOKE_AGENT,
                legal=frozenset({forced}),
                forced=forced,
                generation=gen,
            )
        if not ctx.viewed_right:
            forced = view_card("R")
            return Gate(
                GateKind.INVOKE_AGENT,
                legal=frozenset({forced}),
                forced=forced,
                generation=gen,
            )

    # 8. agent decision states
    if stage == LoopStage.WIN:
        # uncollected winnings: the only legal branch is the pot pull
        forced = collect_winnings()
        return Gate(
            GateKind.INVOKE_AGENT,
            legal=frozenset({forced}),
            forced=forced,
            generation=gen,
        )
    return Gate(GateKind.INVOKE_AGENT, legal=legal, generation=gen)


def apply_gate(ctx: SessionContext, gate: Gate, event: GateEvent | None = None) -> SessionContext:
    """Fold one gate (and what the session did under it) into the context."""
    if gate.generation != ctx.generation:
        raise StaleContextError(
            f"gate generation {gate.generation} != context {ctx.generation}"
        )
    event = event or GateEvent()
    nxt = replace(ctx, generation=ctx.generation + 1)

    if gate.kind == GateKind.WAIT:
        return replace(nxt, wait_streak=ctx.wait_streak + 1)

    nxt = replace(nxt, wait_streak=0)

    if gate.kind == GateKind.VERIFY:
        return replace(nxt, awaiting_verify=False, pending_atom=None, retry_count=0)

    if gate.kind == GateKind.COMPLETE:
        return replace(nxt, plan=None, pending_atom=None, awaiting_verify=False, retry_count=0)

    if gate.kind == GateKind.CONTINUE_ATOM:
        nxt = _note_view(nxt, event.viewed_side)
        if event.new_plan is not None:
            nxt = replace(nxt, plan=event.new_plan)
        if event.dispatched_atom is not None:
            return replace(
                nxt,
                pending_atom=event.dispatched_atom,
                awaiting_verify=True,
                retry_count=0,
            )
        return nxt

    if gate.kind == GateKind.RECOVER_RETRY:
        return replace(nxt, retry_count=ctx.retry_count + 1, awaiting_verify=True)

    if gate.kind == GateKind.INVOKE_AGENT:
        nxt = _note_view(nxt, event.viewed_side)
        nxt = replace(nxt, plan=event.new_plan)
        if event.dispatched_atom is not None:
            nxt = replace(
                nxt,
                pending_atom=event.dispatched_atom,
                awaiting_verify=True,
                retry_count=0,
            )
        return nxt

    if gate.kind == GateKind.REQUEST_HUMAN:
        return replace(nxt, human_requested=True)

    if gate.kind == GateKind.TERMINATE:
        return replace(nxt, terminated=True, termination_outcome=gate.outcome)

    raise ValueError(f"unknown gate kind {gate.kind}")  # pragma: no cover


def _note_view(ctx: SessionContext, side: str | None) -> SessionContext:
    if side == "L":
        ctx = replace(ctx, viewed_left=True)
    elif side == "R":
        ctx = replace(ctx, viewed_right=True)
    if ctx.viewed_left and ctx.viewed_right:
        ctx = replace(ctx, fresh_game=False)
    return ctx
