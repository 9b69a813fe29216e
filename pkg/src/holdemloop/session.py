"""Closed-loop hand orchestration.

One session runs one hand through the capture -> perceive -> route ->
execute loop: every captured state appends exactly one trajectory event,
the router picks the gate, the policy simulator executes dispatched
atoms, and the opponent seat acts instantly between captures. Records
are fully determined by the config seeds.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field, replace

from . import poker, profiles
from .agents import (
    AgentKind,
    DecisionRequest,
    ExternalAgent,
    HeuristicAgent,
    HeuristicThresholds,
    ScriptedAgent,
    decide,
)
from .bench import CounterReport, TrajectoryEvent, compute_counters
from .perceive import NoiseProfile, ParsedState, perceive, project_truth
from .poker import ShowdownOutcome
from .policy import OutcomeProfile, execute_atom, sample_outcome, scene_stable_after
from .router import (
    Budgets,
    Gate,
    GateEvent,
    GateKind,
    SessionContext,
    apply_gate,
    route,
)
from .tabletop import (
    Card,
    LoopStage,
    OutcomeLevel,
    Street,
    TableConfig,
    TableState,
    canonical_dumps,
    chip_value,
    new_initial_table,
)
from .tabletop import Facing
from .translate import (
    AgentPrimitive,
    AgentPrimitiveName,
    AtomPlan,
    Audio,
    Perceive,
    RobotAtom,
    StateTransition,
    check,
    fold,
    next_atom,
    parse_agent_label,
    translate,
)
from .translate import DONE as PLAN_DONE

logger = logging.getLogger(__name__)

TERMINATION_CAUSES = (
    "terminal_outcome",
    "scene_unusable",
    "budget_exhausted",
    "human_requested",
    "state_limit",
)


class ConfigUnresolvableError(Exception):
    """A named profile or agent spec in the config cannot be resolved."""


@dataclass(frozen=True)
class SessionConfig:
    """Everything that determines one hand, seeds included."""

    table: TableConfig = TableConfig()
    outcome_profile: str = "always-sp"
    noise_profile: str = "noiseless"
    budgets: Budgets = Budgets()
    robot_agent: dict = field(default_factory=lambda: {"kind": "heuristic"})
    opponent_agent: dict = field(default_factory=lambda: {"kind": "heuristic"})
    policy_seed: int = 0
    perceiver_seed: int = 0
    agent_seed: int = 0
    opponent_delay: int = 1  # captures before the opponent acts on its turn
    max_states: int = 200
    store_snapshots: bool = True
    dc_continuable: bool = False
    tie_outcome: str = "win"  # parsed showdown outcome for split pots

    def to_doc(self) -> dict:
        def agent_doc(spec: dict) -> dict:
            # external transports are live objects, not serializable config
            return {k: v for k, v in spec.items() if k != "transport"}

        return {
            "table": self.table.to_doc(),
            "outcome_profile": self.outcome_profile,
            "noise_profile": self.noise_profile,
            "budgets": {
                "wait_budget": self.budgets.wait_budget,
                "retry_budget": self.budgets.retry_budget,
            },
            "robot_agent": agent_doc(self.robot_agent),
            "opponent_agent": agent_doc(self.opponent_agent),
            "policy_seed": self.policy_seed,
            "perceiver_seed": self.perceiver_seed,
            "agent_seed": self.agent_seed,
            "opponent_delay": self.opponent_delay,
            "max_states": self.max_states,
            "store_snapshots": self.store_snapshots,
            "dc_continuable": self.dc_continuable,
            "tie_outcome": self.tie_outcome,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "SessionConfig":
        budgets = doc.get("budgets", {})
        return cls(
            table=TableConfig.from_doc(doc.get("table", {})),
            outcome_profile=doc.get("outcome_profile", "always-sp"),
            noise_profile=doc.get("noise_profile", "noiseless"),
            budgets=Budgets(
                wait_budget=int(budgets.get("wait_budget", 4)),
                retry_budget=int(budgets.get("retry_budget", 1)),
            ),
            robot_agent=dict(doc.get("robot_agent", {"kind": "heuristic"})),
            opponent_agent=dict(doc.get("opponent_agent", {"kind": "heuristic"})),
            policy_seed=int(doc.get("policy_seed", 0)),
            perceiver_seed=int(doc.get("perceiver_seed", 0)),
            agent_seed=int(doc.get("agent_seed", 0)),
            opponent_delay=int(doc.get("opponent_delay", 1)),
            max_states=int(doc.get("max_states", 200)),
            store_snapshots=bool(doc.get("store_snapshots", True)),
            dc_continuable=bool(doc.get("dc_continuable", False)),
            tie_outcome=doc.get("tie_outcome", "win"),
        )


def build_agent(spec: dict) -> AgentKind | None:
    """Instantiate an agent seat from its config document.

    ``{"kind": "console"}`` returns None: the seat is driven by wire
    messages instead of an in-process decision maker.
    """
    kind = spec.get("kind")
    if kind == "scripted":
        return ScriptedAgent([parse_agent_label(s) for s in spec.get("script", [])])
    if kind == "heuristic":
        thresholds = spec.get("thresholds", {})
        return HeuristicAgent(
            HeuristicThresholds(
                fold_below=float(thresholds.get("fold_below", 0.3)),
                raise_at=float(thresholds.get("raise_at", 0.7)),
                all_in_at=float(thresholds.get("all_in_at", 0.95)),
                strength_trials=int(thresholds.get("strength_trials", 400)),
            )
        )
    if kind == "external":
        transport = spec.get("transport")
        if transport is None:
            raise ConfigUnresolvableError("external agent needs a transport")
        return ExternalAgent(transport=transport, timeout=float(spec.get("timeout", 30.0)))
    if kind == "console":
        return None
    raise ConfigUnresolvableError(f"unknown agent kind {kind!r}")


@dataclass(frozen=True)
class AtomOutcome:
    """One dispatched atom and its sampled level."""

    state_index: int
    atom: str
    level: OutcomeLevel

    def to_doc(self) -> dict:
        return {
            "state_index": self.state_index,
            "atom": self.atom,
            "level": self.level.value,
        }


@dataclass
class SessionRecord:
    """Everything a finished hand leaves behind."""

    config: dict
    events: list[TrajectoryEvent]
    atom_outcomes: list[AtomOutcome]
    perception_misroutes: list[int]
    counters: CounterReport
    termination_cause: str
    outcome: str | None
    final_truth: dict
    parsed_states: list[dict] = field(default_factory=list)
    truth_states: list[dict] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "config": self.config,
            "events": [e.to_doc() for e in self.events],
            "atom_outcomes": [a.to_doc() for a in self.atom_outcomes],
            "perception_misroutes": list(self.perception_misroutes),
            "counters": self.counters.to_doc(),
            "termination_cause": self.termination_cause,
            "outcome": self.outcome,
            "final_truth": self.final_truth,
            "parsed_states": self.parsed_states,
            "truth_states": self.truth_states,
        }

    def encode(self) -> bytes:
        return canonical_dumps(self.to_doc(), pretty=True).encode("utf-8")


@dataclass
class _PendingSettle:
    """Scene timeline after an atom dispatch."""

    motion_end: int  # captures up to here show the robot still acting
    settle_end: int  # captures up to here show an unstable scene
    stage: LoopStage
    stable: bool


class Session:
    """Stepwise closed-loop engine; one instance per hand, single-threaded."""

    def __init__(self, config: SessionConfig) -> None:
        self.config = config
        try:
            self.outcome_profile: OutcomeProfile = profiles.outcome_profile(
                config.outcome_profile
            )
            self.noise: NoiseProfile = profiles.noise_profile(config.noise_profile)
        except KeyError as exc:
            raise ConfigUnresolvableError(str(exc)) from None
        self.truth: TableState = new_initial_table(config.table)
        self.stage = LoopStage.IDLE
        self.so = ShowdownOutcome.NOT_SHOWDOWN
        self.uncertain: tuple[str, ...] = ()
        self.ctx = SessionContext()
        self.policy_rng = random.Random(config.policy_seed)
        self.perceive_rng = random.Random(config.perceiver_seed)
        self.agent_rng = random.Random(config.agent_seed)
        self.robot_agent = build_agent(config.robot_agent)
        if self.robot_agent is None:
            raise ConfigUnresolvableError("the robot seat needs an in-process agent")
        self.opponent_agent = build_agent(config.opponent_agent)
        self.console_actions: deque[AgentPrimitive] = deque()
        self.cached_holes: dict[str, Card | None] = {"L": None, "R": None}
        self.pending: _PendingSettle | None = None
        self.opp_turn_captures = 0
        self.help_reason: str | None = None
        self.forced_decision: AgentPrimitive | None = None
        self.state_index = 0
        self.finished = False
        self.termination_cause: str | None = None
        self.outcome: str | None = None
        self.events: list[TrajectoryEvent] = []
        self.atom_outcomes: list[AtomOutcome] = []
        self.perception_misroutes: list[int] = []
        self.parsed_docs: list[dict] = []
        self.truth_docs: list[dict] = []

    # -- stepping ------------------------------------------------------

    def step(self) -> TrajectoryEvent:
        """Process exactly one captured state."""
        if self.finished:
            raise RuntimeError("session already finished")
        index = self.state_index
        self._settle_tick(index)
        self._opponent_tick()

        parsed = perceive(
            self.truth, self.stage, self.so, self.noise, self.perceive_rng, self.uncertain
        )
        legal = self._legal_set()
        gate = route(parsed, self.ctx, self.config.budgets, legal=legal)
        self._note_misroute(index, parsed, gate, legal)

        event, gate_event = self._execute_gate(index, gate, parsed, legal)
        self.events.append(event)
        if self.config.store_snapshots:
            self.parsed_docs.append(parsed.to_doc())
            self.truth_docs.append(self.truth.to_doc())
        self.ctx = apply_gate(self.ctx, gate, gate_event)

        self.state_index += 1
        if gate.kind == GateKind.TERMINATE:
            self._finish(gate.outcome)
        elif not self.finished and self.state_index >= self.config.max_states:
            self.finished = True
            self.termination_cause = "state_limit"
            self.outcome = None
        return event

    def run(self) -> SessionRecord:
        while not self.finished:
            self.step()
        return self.record()

    def record(self) -> SessionRecord:
        return SessionRecord(
            config=self.config.to_doc(),
            events=list(self.events),
            atom_outcomes=list(self.atom_outcomes),
            perception_misroutes=list(self.perception_misroutes),
            counters=compute_counters(self.events),
            termination_cause=self.termination_cause or "state_limit",
            outcome=self.outcome,
            final_truth=self.truth.to_doc(),
            parsed_states=list(self.parsed_docs),
            truth_states=list(self.truth_docs),
        )

    # -- per-capture bookkeeping ----------------------------------------

    def _settle_tick(self, index: int) -> None:
        if self.pending is None:
            return
        if index <= self.pending.motion_end:
            self.stage = LoopStage.ACTING
            self.truth = replace(self.truth, scene_stable=False)
        elif index <= self.pending.settle_end:
            self.stage = LoopStage.ATOM_IDLE
            self.truth = replace(self.truth, scene_stable=False)
        else:
            self.stage = self.pending.stage
            self.truth = replace(self.truth, scene_stable=self.pending.stable)
            self.pending = None

    def _opponent_tick(self) -> None:
        """Let the opponent seat act between captures when it is due."""
        if self.pending is not None or self.finished:
            return
        if self.truth.street not in poker.BETTING_STREETS or self.truth.is_robot_turn:
            self.opp_turn_captures = 0
            return
        if poker.round_complete(self.truth):
            return
        self.opp_turn_captures += 1
        action = self._next_opponent_action()
        if action is None:
            return
        if action.name == AgentPrimitiveName.FOLD:
            self.truth = poker.settle_pot(self.truth, "opponent_folded")
            self.stage = LoopStage.WIN
            self.so = ShowdownOutcome.WIN
            self.opp_turn_captures = 0
            return
        self.truth = poker.register_opponent_action(self.truth, action)
        self.opp_turn_captures = 0
        self._maybe_advance()

    def _next_opponent_action(self) -> AgentPrimitive | None:
        if self.opponent_agent is None:
            return self.console_actions.popleft() if self.console_actions else None
        if self.opp_turn_captures < self.config.opponent_delay:
            return None
        legal = poker.opponent_legal_actions(self.truth)
        if not legal:
            return None
        request = DecisionRequest(
            parsed=project_truth(self.truth, self.stage, self.so),
            cached_holes={
                "L": self.truth.opponent_hole_left.card if self.truth.opponent_hole_left else None,
                "R": self.truth.opponent_hole_right.card if self.truth.opponent_hole_right else None,
            },
            legal=frozenset(legal),
            street=self.truth.street,
            pot_value=self._pot_value(),
        )
        action = decide(request, self.opponent_agent, self.agent_rng)
        if action.name == AgentPrimitiveName.REQUEST_HUMAN or action not in legal:
            action = check() if check() in legal else fold()
        return action

    def _pot_value(self) -> int:
        return chip_value(self.truth.robot_bet) + chip_value(self.truth.opponent_bet)

    def _legal_set(self) -> frozenset[AgentPrimitive] | None:
        if not self.truth.is_robot_turn:
            return None
        try:
            return frozenset(poker.legal_actions(self.truth))
        except poker.NotRobotTurnError:  # pragma: no cover - guarded above
            return None

    def _note_misroute(
        self,
        index: int,
        parsed: ParsedState,
        gate: Gate,
        legal: frozenset[AgentPrimitive] | None,
    ) -> None:
        if not self.noise.rates:
            return
        clean = project_truth(self.truth, self.stage, self.so, self.uncertain)
        if clean == parsed:
            return
        truth_gate = route(clean, self.ctx, self.config.budgets, legal=legal)
        if (truth_gate.kind, truth_gate.reason) != (gate.kind, gate.reason):
            self.perception_misroutes.append(index)

    # -- gate execution --------------------------------------------------

    def _execute_gate(
        self,
        index: int,
        gate: Gate,
        parsed: ParsedState,
        legal: frozenset[AgentPrimitive] | None,
    ) -> tuple[TrajectoryEvent, GateEvent]:
        kind = gate.kind

        if kind == GateKind.WAIT:
            return (
                TrajectoryEvent(index, "wait", reason=gate.reason),
                GateEvent(),
            )

        if kind == GateKind.VERIFY:
            return TrajectoryEvent(index, "verify"), GateEvent()

        if kind == GateKind.COMPLETE:
            self._on_plan_complete(self.ctx.plan)
            return TrajectoryEvent(index, "complete"), GateEvent()

        if kind == GateKind.CONTINUE_ATOM:
            return self._continue_plan(index)

        if kind == GateKind.RECOVER_RETRY:
            atom = self.ctx.pending_atom
            assert atom is not None
            self._dispatch_atom(index, atom)
            return (
                TrajectoryEvent(index, "recover_retry", robot_atom=atom.name, retry=True),
                GateEvent(dispatched_atom=atom),
            )

        if kind == GateKind.REQUEST_HUMAN:
            self.help_reason = gate.reason
            self.stage = LoopStage.DOWN
            return (
                TrajectoryEvent(
                    index, "request_human", agent_primitive="request_human"
                ),
                GateEvent(),
            )

        if kind == GateKind.TERMINATE:
            return TrajectoryEvent(index, "terminate"), GateEvent()

        if kind == GateKind.INVOKE_AGENT:
            return self._invoke_agent(index, gate, parsed, legal)

        raise ValueError(f"unhandled gate {kind}")  # pragma: no cover

    def _invoke_agent(
        self,
        index: int,
        gate: Gate,
        parsed: ParsedState,
        legal: frozenset[AgentPrimitive] | None,
    ) -> tuple[TrajectoryEvent, GateEvent]:
        if self.forced_decision is not None:
            # a queued resume transition outranks the router's forced pick
            decision = self.forced_decision
            self.forced_decision = None
        elif gate.forced is not None:
            decision = gate.forced
        else:
            request = DecisionRequest(
                parsed=parsed,
                cached_holes=dict(self.cached_holes),
                legal=gate.legal or legal or frozenset(),
                street=self.truth.street,
                pot_value=self._pot_value(),
            )
            decision = decide(request, self.robot_agent, self.agent_rng)

        if decision.name == AgentPrimitiveName.REQUEST_HUMAN:
            self.help_reason = "agent"
            self.stage = LoopStage.DOWN
            return (
                TrajectoryEvent(index, "request_human", agent_primitive=decision.label()),
                GateEvent(),
            )

        plan = translate(decision, self.truth)
        event, gate_event = self._start_plan(index, decision, plan)
        return event, gate_event

    def _start_plan(
        self, index: int, decision: AgentPrimitive, plan: AtomPlan
    ) -> tuple[TrajectoryEvent, GateEvent]:
        """Dispatch the first step of a fresh plan at its decision state."""
        plan, atom, viewed = self._drive_plan(index, plan)
        label = decision.label()
        if atom is None and plan.complete:
            # pure audio/transition primitives finish inside this state
            self._on_plan_complete(plan)
            return (
                TrajectoryEvent(index, "invoke_agent", agent_primitive=label),
                GateEvent(viewed_side=viewed),
            )
        return (
            TrajectoryEvent(
                index,
                "invoke_agent",
                agent_primitive=label,
                robot_atom=atom.name if atom else None,
            ),
            GateEvent(new_plan=plan, dispatched_atom=atom, viewed_side=viewed),
        )

    def _continue_plan(self, index: int) -> tuple[TrajectoryEvent, GateEvent]:
        plan = self.ctx.plan
        assert plan is not None
        plan, atom, viewed = self._drive_plan(index, plan)
        if atom is None and plan.complete:
            self._on_plan_complete(plan)
            return (
                TrajectoryEvent(index, "continue_atom"),
                GateEvent(new_plan=None, viewed_side=viewed),
            )
        return (
            TrajectoryEvent(
                index, "continue_atom", robot_atom=atom.name if atom else None
            ),
            GateEvent(new_plan=plan, dispatched_atom=atom, viewed_side=viewed),
        )

    def _drive_plan(
        self, index: int, plan: AtomPlan
    ) -> tuple[AtomPlan, RobotAtom | None, str | None]:
        """Advance a plan through one captured state.

        Executes at most one robot atom or one perceive step; audio and
        transition steps are instant and run eagerly around it.
        """
        viewed: str | None = None
        while True:
            step, advanced = next_atom(plan)
            if step is PLAN_DONE:
                return plan, None, viewed
            if isinstance(step, RobotAtom):
                self._dispatch_atom(index, step)
                return advanced, step, viewed
            if isinstance(step, Perceive):
                slot = self.truth.hole_left if step.side == "L" else self.truth.hole_right
                self.cached_holes[step.side] = slot.card if slot else None
                return advanced, None, step.side
            if isinstance(step, Audio):
                logger.info("audio cue: %s", step.text)
                plan = advanced
                continue
            if isinstance(step, StateTransition):
                self._apply_transition(step.tag)
                plan = advanced
                continue

    def _dispatch_atom(self, index: int, atom: RobotAtom) -> None:
        level = sample_outcome(atom.name, self.outcome_profile, self.policy_rng)
        self.atom_outcomes.append(AtomOutcome(index, atom.name, level))
        self.truth, stage_after = execute_atom(
            self.truth, atom, level, dc_continuable=self.config.dc_continuable
        )
        self.pending = _PendingSettle(
            motion_end=index + 1,
            settle_end=index + self.outcome_profile.settle_delay,
            stage=stage_after,
            stable=scene_stable_after(level, self.config.dc_continuable),
        )
        self.stage = LoopStage.ACTING
        self.truth = replace(self.truth, scene_stable=False)

    def _apply_transition(self, tag: str) -> None:
        if tag == "sleep":
            return
        if tag == "fold":
            self.truth = poker.settle_pot(self.truth, "lose")
            self.stage = LoopStage.LOSE
            self.so = ShowdownOutcome.LOSE
            return
        if tag == "stop":
            self._finish("stopped")
            return
        if tag == "reset_to_init":
            self.stage = LoopStage.IDLE
            self.truth = replace(self.truth, scene_stable=True)
            return
        if tag == "down":
            self.stage = LoopStage.DOWN
            return
        raise ValueError(f"unknown transition {tag!r}")  # pragma: no cover

    # -- plan completion and hand progression ----------------------------

    def _on_plan_complete(self, plan: AtomPlan | None) -> None:
        # fold/stop transitions set a terminal stage; leave it in place
        if self.stage in (LoopStage.ATOM_IDLE, LoopStage.IDLE):
            self.stage = LoopStage.IDLE
        if plan is None:
            return
        origin = plan.origin.name

        if origin in (
            AgentPrimitiveName.RAISE,
            AgentPrimitiveName.CALL,
            AgentPrimitiveName.ALL_IN,
        ):
            delta = sum(
                int(s.name.split("_")[1])
                for s in plan.steps
                if isinstance(s, RobotAtom) and s.name.startswith("push_")
            )
            self.truth = poker.register_robot_bet(self.truth, delta)
            self._maybe_advance()
        elif origin == AgentPrimitiveName.CHECK:
            self.truth = poker.register_robot_check(self.truth)
            self._maybe_advance()
        elif origin in (AgentPrimitiveName.SHOW_CARD, AgentPrimitiveName.PUT_DOWN_CARD):
            self._maybe_judge_showdown()
        elif origin == AgentPrimitiveName.COLLECT_WINNINGS:
            self.stage = LoopStage.WIN

    def _maybe_advance(self) -> None:
        while (
            self.truth.street in poker.BETTING_STREETS
            and poker.round_complete(self.truth)
        ):
            self.truth = poker.advance_street(self.truth)
            if self.truth.street == Street.SHOWDOWN:
                self.truth = poker.reveal_opponent_cards(self.truth)
                self.stage = LoopStage.IDLE
                break

    def _maybe_judge_showdown(self) -> None:
        if self.truth.street != Street.SHOWDOWN:
            return
        slots = (
            self.truth.hole_left,
            self.truth.hole_right,
            self.truth.opponent_hole_left,
            self.truth.opponent_hole_right,
        )
        if any(s is None or s.facing != Facing.UP for s in slots):
            return
        result = poker.judge_showdown(
            self.truth.robot_hole_cards(),
            self.truth.opponent_hole_cards(),
            list(self.truth.community_cards),
        )
        if result == "tie":
            self.truth = poker.settle_pot(self.truth, "tie")
            tie_as = self.config.tie_outcome
            self.so = ShowdownOutcome.WIN if tie_as == "win" else ShowdownOutcome.LOSE
            self.uncertain = ("showdown_outcome",)
            self.stage = LoopStage.WIN if tie_as == "win" else LoopStage.LOSE
        elif result == "win":
            self.truth = poker.settle_pot(self.truth, "win")
            self.so = ShowdownOutcome.WIN
            self.stage = LoopStage.WIN
        else:
            self.truth = poker.settle_pot(self.truth, "lose")
            self.so = ShowdownOutcome.LOSE
            self.stage = LoopStage.LOSE

    def _finish(self, outcome: str | None) -> None:
        self.finished = True
        self.outcome = outcome
        if outcome in ("win", "lose", "tie"):
            self.termination_cause = "terminal_outcome"
        elif outcome == "stopped":
            self.termination_cause = "human_requested"
        elif self.help_reason == "down":
            self.termination_cause = "scene_unusable"
        elif self.help_reason == "retry_budget":
            self.termination_cause = "budget_exhausted"
        else:
            self.termination_cause = "human_requested"

    # -- console-driven control (used by the wire service) ---------------

    def feed_opponent_action(self, action: AgentPrimitive) -> None:
        self.console_actions.append(action)

    def resume_from_down(self) -> None:
        """Human acknowledged: resume at a reset-to-home transition."""
        self.ctx = SessionContext(
            fresh_game=self.ctx.fresh_game,
            viewed_left=self.ctx.viewed_left,
            viewed_right=self.ctx.viewed_right,
            generation=self.ctx.generation,
        )
        self.stage = LoopStage.IDLE
        self.truth = replace(self.truth, scene_stable=True)
        self.pending = None
        self.help_reason = None
        self.forced_decision = parse_agent_label("reset_to_init")


def run_hand(config: SessionConfig) -> SessionRecord:
    """Run one hand to termination and return its record."""
    return Session(config).run()


def run_match(config: SessionConfig, hands: int) -> list[SessionRecord]:
    """Thin multi-hand loop: carried-over inventories, alternating blinds.

    Chips left in the bet zones of an aborted hand return to their
    owners so the match total is conserved. Seeds advance per hand to
    keep every hand distinct but the match reproducible.
    """
    from .tabletop import Blind

    records: list[SessionRecord] = []
    table = config.table
    for hand_index in range(hands):
        cfg = replace(
            config,
            table=table,
            policy_seed=config.policy_seed + hand_index,
            perceiver_seed=config.perceiver_seed + hand_index,
            agent_seed=config.agent_seed + hand_index,
        )
        session = Session(cfg)
        records.append(session.run())
        truth = session.truth
        table = replace(
            table,
            robot_chips=truth.robot_inventory.add(truth.robot_bet),
            opponent_chips=truth.opponent_inventory.add(truth.opponent_bet),
            robot_blind=Blind.SMALL if table.robot_blind == Blind.BIG else Blind.BIG,
            deck_seed=table.deck_seed + 1,
        )
        if chip_value(table.robot_chips) == 0 or chip_value(table.opponent_chips) == 0:
            break
    return records


def classify_failure(record: SessionRecord) -> dict[str, int]:
    """Attribute every non-clean element of a finished hand.

    Non-scene-preserving atoms attribute to policy execution (retryable)
    or disruptive scene (reset needed); noise-caused gate divergences
    attribute to perception, one entry per affected state. Routing and
    verification errors cannot occur under the deterministic router and
    truthful verifier, so those categories stay empty here.
    """
    tally = {
        "perception": len(record.perception_misroutes),
        "routing_decision": 0,
        "policy_execution": 0,
        "verification": 0,
        "disruptive_scene": 0,
    }
    for atom in record.atom_outcomes:
        if atom.level == OutcomeLevel.TF:
            tally["policy_execution"] += 1
        elif atom.level in (OutcomeLevel.DC, OutcomeLevel.DF):
            tally["disruptive_scene"] += 1
    return tally
