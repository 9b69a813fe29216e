"""Benchmark harness: trial schedules, rate aggregation, and counters.

Covers the 80-trial primitive evaluation schedule, SPSR/TCR aggregation
with the four 20-trial group breakdowns, trajectory counter computation
over event logs, and replay of published per-state label logs into the
same counters.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import reference
from .policy import OutcomeProfile, apply_nominal_effect, sample_outcome
from .rates import fmt1, percent
from .tabletop import (
    Blind,
    Card,
    ChipCount,
    Facing,
    HoleSlot,
    OutcomeLevel,
    Street,
    TableState,
    full_deck,
)
from .translate import (
    PRIMITIVE_BY_NAME,
    RobotAtom,
    dispatches_robot_atom,
    first_atom_name,
    parse_agent_label,
)


class EmptyLogError(Exception):
    """Aggregation over an empty outcome log."""


class NonContiguousError(Exception):
    """Trajectory event indices are not contiguous from zero."""


class UnknownLabelError(Exception):
    """A replayed label is outside the documented vocabulary."""


GROUP_OF: dict[str, str] = {
    prim: group
    for group, prims in reference.PRIMITIVE_GROUPS.items()
    for prim in prims
}

PICKUP_REPS = 10
OTHER_REPS = 5


@dataclass(frozen=True)
class TrialSpec:
    """One primitive-evaluation rollout: the primitive and its scene."""

    primitive: str
    repetition: int
    scene: dict

    @property
    def group(self) -> str:
        return GROUP_OF[self.primitive]

    def to_doc(self) -> dict:
        return {
            "primitive": self.primitive,
            "repetition": self.repetition,
            "scene": self.scene,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TrialSpec":
        return cls(doc["primitive"], int(doc["repetition"]), dict(doc["scene"]))


@dataclass(frozen=True)
class TrialOutcome:
    """One labeled rollout result."""

    primitive: str
    repetition: int
    level: OutcomeLevel

    def to_doc(self) -> dict:
        return {
            "primitive": self.primitive,
            "repetition": self.repetition,
            "level": self.level.value,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TrialOutcome":
        return cls(doc["primitive"], int(doc.get("repetition", 0)), OutcomeLevel(doc["level"]))


def generate_schedule(seed: int = 0) -> list[TrialSpec]:
    """The 80-trial schedule: 10 per pickup primitive, 5 per other.

    Chip-push scenes hold 1..5 chips with the target present and
    seeded-random distractors from other denominations. Chip-pull scenes
    start from a five-chip layout spanning both table sides, all four
    denominations, and a duplicate target, then remove one chip from the
    left side twice and from the right side twice. Put-down and show
    scenes start from a pickup end state (card already held).
    """
    rng = random.Random(seed)
    deck = full_deck()
    specs: list[TrialSpec] = []

    def random_card() -> str:
        return str(rng.choice(deck))

    for name, side in (("pick_up_left", "L"), ("pick_up_right", "R")):
        for rep in range(PICKUP_REPS):
            specs.append(
                TrialSpec(name, rep, {"side": side, "card": random_card(), "facing": "down"})
            )

    for denom in (5, 10, 50, 100):
        others = [d for d in (5, 10, 50, 100) if d != denom]
        for rep in range(OTHER_REPS):
            chips = {denom: 1}
            for _ in range(rep):  # rep k has k+1 chips total
                extra = rng.choice(others)
                chips[extra] = chips.get(extra, 0) + 1
            specs.append(
                TrialSpec(
                    f"push_{denom}",
                    rep,
                    {"inventory": ChipCount.from_counts(chips).to_doc()},
                )
            )

    for denom in (5, 10, 50, 100):
        others = [d for d in (5, 10, 50, 100) if d != denom]
        rng.shuffle(others)
        d_a, d_b, d_c = others
        # removal order: two left distractors, right distractor, right target
        layouts = []
        left = [denom, d_a, d_b]
        right = [denom, d_c]
        for removal in (None, (left, d_a), (left, d_b), (right, d_c), (right, denom)):
            if removal is not None:
                zone, chip = removal
                zone.remove(chip)
            layouts.append(
                {
                    "left": ChipCount.from_counts(_tally(left)).to_doc(),
                    "right": ChipCount.from_counts(_tally(right)).to_doc(),
                }
            )
        for rep, layout in enumerate(layouts):
            specs.append(TrialSpec(f"pull_{denom}", rep, layout))

    for name, side in (
        ("put_down_left", "L"),
        ("put_down_right", "R"),
        ("show_left", "L"),
        ("show_right", "R"),
    ):
        for rep in range(OTHER_REPS):
            specs.append(
                TrialSpec(name, rep, {"side": side, "card": random_card(), "facing": "in_hand"})
            )
    return specs


def _tally(chips: list[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in chips:
        out[c] = out.get(c, 0) + 1
    return out


def scene_table(spec: TrialSpec) -> TableState:
    """Materialize a trial scene as an executable table state."""
    scene = spec.scene
    slot_left = slot_right = None
    robot_inv = robot_bet = opp_bet = ChipCount()
    if "card" in scene:
        slot = HoleSlot(Card.parse(scene["card"]), Facing(scene["facing"]))
        if scene["side"] == "L":
            slot_left = slot
        else:
            slot_right = slot
    if "inventory" in scene:
        robot_inv = ChipCount.from_doc(scene["inventory"])
    if "left" in scene:
        robot_bet = ChipCount.from_doc(scene["left"])
        opp_bet = ChipCount.from_doc(scene["right"])
    return TableState(
        deck=(),
        hole_left=slot_left,
        hole_right=slot_right,
        opponent_hole_left=None,
        opponent_hole_right=None,
        community_cards=(),
        robot_inventory=robot_inv,
        opponent_inventory=ChipCount(),
        robot_bet=robot_bet,
        opponent_bet=opp_bet,
        robot_blind=Blind.BIG,
        small_blind=5,
        big_blind=10,
        is_robot_turn=True,
        scene_stable=True,
        street=Street.PREFLOP,
    )


def trial_atom(spec: TrialSpec) -> RobotAtom:
    """The robot atom a trial dispatches, with its pull zone resolved."""
    prim = PRIMITIVE_BY_NAME[spec.primitive]
    if spec.primitive.startswith("pull_"):
        denom = int(spec.primitive.split("_")[1])
        left = ChipCount.from_doc(spec.scene["left"])
        zone = "robot_bet" if left.get(denom) > 0 else "opponent_bet"
        return RobotAtom(prim.id, zone=zone)
    return RobotAtom(prim.id)


# --- rate aggregation ---------------------------------------------------


@dataclass(frozen=True)
class RatePair:
    """SPSR/TCR over one trial set, exact and as printed."""

    counts: dict[str, int]
    n: int
    spsr: Fraction
    tcr: Fraction

    @property
    def spsr_str(self) -> str:
        return fmt1(self.spsr)

    @property
    def tcr_str(self) -> str:
        return fmt1(self.tcr)

    @property
    def display(self) -> str:
        return f"{self.spsr_str}/{self.tcr_str}"

    def to_doc(self) -> dict:
        return {
            "counts": dict(self.counts),
            "n": self.n,
            "spsr": self.spsr_str,
            "tcr": self.tcr_str,
        }


@dataclass(frozen=True)
class BenchReport:
    """Aggregate and per-group rates over an outcome log."""

    overall: RatePair
    groups: dict[str, RatePair]

    def to_doc(self) -> dict:
        return {
            "overall": self.overall.to_doc(),
            "groups": {g: r.to_doc() for g, r in self.groups.items()},
        }


def _rate_pair(outcomes: list[TrialOutcome]) -> RatePair:
    counts = {level.value: 0 for level in OutcomeLevel}
    for out in outcomes:
        counts[out.level.value] += 1
    n = len(outcomes)
    sp = counts[OutcomeLevel.SP.value]
    dc = counts[OutcomeLevel.DC.value]
    return RatePair(counts=counts, n=n, spsr=percent(sp, n), tcr=percent(sp + dc, n))


def aggregate_outcomes(log: list[TrialOutcome]) -> BenchReport:
    """SPSR counts scene-preserving successes; TCR adds disruptive ones."""
    if not log:
        raise EmptyLogError("no trial outcomes to aggregate")
    groups: dict[str, RatePair] = {}
    for group in reference.GROUP_ORDER:
        members = [o for o in log if GROUP_OF.get(o.primitive) == group]
        if members:
            groups[group] = _rate_pair(members)
    return BenchReport(overall=_rate_pair(log), groups=groups)


def rates_from_counts(sp: int, dc: int, tf: int, df: int) -> RatePair:
    """Rate pair straight from outcome counts (golden-test entry point)."""
    n = sp + dc + tf + df
    if n == 0:
        raise EmptyLogError("no counts")
    counts = {"SP": sp, "DC": dc, "TF": tf, "DF": df}
    return RatePair(counts=counts, n=n, spsr=percent(sp, n), tcr=percent(sp + dc, n))


def run_primitive_bench(
    schedule: list[TrialSpec], profile: OutcomeProfile, seed: int = 0
) -> tuple[list[TrialOutcome], BenchReport]:
    """Simulate every trial independently and aggregate the outcomes.

    Each trial owns an rng stream derived from (seed, trial index); the
    scene is rebuilt fresh per trial and the sampled effect is applied to
    it, which also validates that every generated scene is executable.
    """
    log: list[TrialOutcome] = []
    for index, spec in enumerate(schedule):
        rng = random.Random(f"{seed}:{index}")
        level = sample_outcome(spec.primitive, profile, rng)
        if level in (OutcomeLevel.SP, OutcomeLevel.DC):
            apply_nominal_effect(scene_table(spec), trial_atom(spec))
        log.append(TrialOutcome(spec.primitive, spec.repetition, level))
    return log, aggregate_outcomes(log)


# --- trajectory counters ------------------------------------------------


@dataclass(frozen=True)
class TrajectoryEvent:
    """One captured state of a rollout, as logged for counters."""

    state_index: int
    gate: str
    reason: str | None = None
    agent_primitive: str | None = None  # label dispatched at this state
    robot_atom: str | None = None  # atom dispatched at this state
    retry: bool = False
    label: str | None = None  # replay source label, when replayed

    def to_doc(self) -> dict:
        doc: dict = {"state_index": self.state_index, "gate": self.gate}
        for key in ("reason", "agent_primitive", "robot_atom", "label"):
            value = getattr(self, key)
            if value is not None:
                doc[key] = value
        if self.retry:
            doc["retry"] = True
        return doc


@dataclass(frozen=True)
class CounterReport:
    """Operational counters over one trajectory."""

    states: int
    ap: int
    dpp: int
    wa: int
    hl: int
    rc: int
    lap: str | None
    ldp: str | None

    def to_doc(self) -> dict:
        return {
            "states": self.states,
            "ap": self.ap,
            "dpp": self.dpp,
            "wa": self.wa,
            "hl": self.hl,
            "rc": self.rc,
            "lap": self.lap,
            "ldp": self.ldp,
        }


@dataclass
class _RunTracker:
    """Longest consecutive-state run, earliest first on ties."""

    best_name: str | None = None
    best_len: int = 0
    best_start: int = -1
    cur_name: str | None = None
    cur_len: int = 0
    cur_start: int = -1

    def open(self, name: str, index: int) -> None:
        self.close()
        self.cur_name, self.cur_len, self.cur_start = name, 1, index

    def extend(self) -> None:
        if self.cur_name is not None:
            self.cur_len += 1

    def close(self) -> None:
        if self.cur_name is not None and (
            self.cur_len > self.best_len
            or (self.cur_len == self.best_len and self.cur_start < self.best_start)
        ):
            self.best_name, self.best_len, self.best_start = (
                self.cur_name,
                self.cur_len,
                self.cur_start,
            )
        self.cur_name, self.cur_len, self.cur_start = None, 0, -1


def compute_counters(events: list[TrajectoryEvent]) -> CounterReport:
    """Fold an event log into the counter suite.

    A primitive occupies every state from its dispatch until the next
    dispatch at the same level (or the end of the log); waits, gates,
    and the hole-card cache extend the current run. This attribution
    makes the longest-run columns of the published case studies
    reproducible.
    """
    for expected, event in enumerate(events):
        if event.state_index != expected:
            raise NonContiguousError(
                f"state index {event.state_index} at position {expected}"
            )

    ap = dpp = wa = hl = rc = 0
    ap_runs = _RunTracker()
    atom_runs = _RunTracker()

    for event in events:
        terminal = event.gate == "terminate"
        if event.agent_primitive is not None:
            ap += 1
            if event.agent_primitive.startswith("request_human"):
                hl += 1
            ap_runs.open(event.agent_primitive, event.state_index)
            if event.robot_atom is None:
                atom_runs.close()
        elif terminal:
            ap_runs.close()
        else:
            ap_runs.extend()

        if event.robot_atom is not None:
            dpp += 1
            atom_runs.open(event.robot_atom, event.state_index)
        elif terminal:
            atom_runs.close()
        elif event.agent_primitive is None:
            atom_runs.extend()

        if event.gate == "wait":
            wa += 1
        if event.retry:
            rc += 1

    ap_runs.close()
    atom_runs.close()
    return CounterReport(
        states=len(events),
        ap=ap,
        dpp=dpp,
        wa=wa,
        hl=hl,
        rc=rc,
        lap=ap_runs.best_name,
        ldp=atom_runs.best_name,
    )


# --- label replay -------------------------------------------------------

_WAIT_RE = re.compile(r"^wait\s*\(\s*(scene|acting|turn)\s*\)$")
_CONT_RE = re.compile(r"^cont\.\s*([a-z_0-9]+)$")

_GATE_LABELS = {
    "verify": "verify",
    "complete": "complete",
    "retry": "recover_retry",
    "cache hole card": "continue_atom",
    "end": "terminate",
}


def parse_label_events(labels: list[str]) -> list[TrajectoryEvent]:
    """Parse per-state labels into trajectory events.

    Agent-primitive labels attribute one AP and, when the primitive
    dispatches robot atoms, a first atom at the same state. Chip
    primitives whose first atom is not determined by the label alone
    (call, all_in, collect_winnings) take the name of the first
    continued atom inside their own span, falling back to the
    largest-denomination convention.
    """
    events: list[TrajectoryEvent] = []
    raw = [label.strip() for label in labels]
    for index, text in enumerate(raw):
        wait_match = _WAIT_RE.match(text)
        if wait_match:
            events.append(
                TrajectoryEvent(index, "wait", reason=wait_match.group(1), label=text)
            )
            continue
        cont_match = _CONT_RE.match(text)
        if cont_match:
            atom = cont_match.group(1)
            if atom not in PRIMITIVE_BY_NAME:
                raise UnknownLabelError(f"unknown atom in label {text!r}")
            events.append(
                TrajectoryEvent(index, "continue_atom", robot_atom=atom, label=text)
            )
            continue
        if text in _GATE_LABELS:
            gate = _GATE_LABELS[text]
            if text == "retry":
                retried = _last_atom_name(events)
                events.append(
                    TrajectoryEvent(
                        index, gate, robot_atom=retried, retry=True, label=text
                    )
                )
            else:
                events.append(TrajectoryEvent(index, gate, label=text))
            continue
        try:
            prim = parse_agent_label(text)
        except ValueError as exc:
            raise UnknownLabelError(str(exc)) from None
        atom_name = None
        if dispatches_robot_atom(prim):
            atom_name = _scan_first_cont(raw, index) or first_atom_name(prim)
        gate = (
            "request_human"
            if prim.name.value == "request_human"
            else "invoke_agent"
        )
        events.append(
            TrajectoryEvent(
                index,
                gate,
                agent_primitive=prim.label(),
                robot_atom=atom_name,
                label=text,
            )
        )
    return events


def _last_atom_name(events: list[TrajectoryEvent]) -> str | None:
    for event in reversed(events):
        if event.robot_atom is not None:
            return event.robot_atom
    return None


def _scan_first_cont(raw: list[str], start: int) -> str | None:
    """First continued atom before the next agent-primitive label."""
    prim = parse_agent_label(raw[start])
    if prim.name.value not in ("call", "all_in", "collect_winnings"):
        return None
    for text in raw[start + 1 :]:
        cont = _CONT_RE.match(text)
        if cont:
            return cont.group(1)
        if (
            not _WAIT_RE.match(text)
            and text not in _GATE_LABELS
        ):
            return None  # next agent primitive starts here
    return None


def replay_labels(labels: list[str]) -> CounterReport:
    """Counters for a published per-state label log."""
    return compute_counters(parse_label_events(labels))


@dataclass(frozen=True)
class ReplayCheck:
    """Computed counters next to the published ones, mismatches flagged."""

    trajectory: str
    computed: CounterReport
    published: dict[str, object]
    mismatches: dict[str, tuple[object, object]] = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "trajectory": self.trajectory,
            "computed": self.computed.to_doc(),
            "published": dict(self.published),
            "mismatches": {
                k: {"computed": c, "published": p}
                for k, (c, p) in self.mismatches.items()
            },
        }


def check_against_reference(report: CounterReport, which: str) -> ReplayCheck:
    """Compare replay counters with the published case-study row.

    Mismatches are reported, never forced: the published label logs do
    not fully determine DPP and RC, so those columns can legitimately
    disagree under the documented attribution.
    """
    published = reference.TRAJECTORY_COUNTERS[which]
    computed_doc = report.to_doc()
    mismatches = {
        key: (computed_doc[key], published[key])
        for key in ("states", "ap", "dpp", "wa", "hl", "rc", "lap", "ldp")
        if computed_doc[key] != published[key]
    }
    return ReplayCheck(
        trajectory=which, computed=report, published=published, mismatches=mismatches
    )
