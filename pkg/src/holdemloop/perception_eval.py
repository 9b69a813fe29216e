"""Deterministic evaluator for the structured-perception benchmark.

Scores predicted parsed states against ground-truth labels over nine
columns: a strict Overall plus eight sub-capability columns with
per-problem applicability. Chip columns demand exact denomination-level
dictionaries; community cards match as sets; Overall is exact match over
every applicable column.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .perceive import ParsedState, parsed_schema_problems
from .rates import fmt1, mean, percent

PROBLEM_CLASSES = (
    "table_decision",
    "outcome_judge",
    "turn_gate",
    "robot_progress",
    "held_card_read",
    "recovery_safety",
)

CHIP_CLASSES = ("table_decision", "outcome_judge")

SUB_COLUMNS = ("LS", "TO", "BI", "CC", "CB", "RCI", "OCI", "SO")
ALL_COLUMNS = ("overall",) + SUB_COLUMNS

CORRECT = "correct"
INCORRECT = "incorrect"
NOT_APPLICABLE = "not_applicable"


class EmptyRunError(Exception):
    """Aggregation over an empty result list."""


class MissingLabelError(Exception):
    """A problem directory lacks its ground-truth label."""


class MalformedDocumentError(Exception):
    """A problem document cannot be parsed (strict mode only)."""


class DuplicateIdError(Exception):
    """Two problems normalize to the same id."""


@dataclass(frozen=True)
class PerceptionProblem:
    """One benchmark problem: class, label, and the graded prediction.

    ``prediction`` is None when the predicted document was missing or
    malformed; in lenient mode that grades as incorrect everywhere
    applicable rather than erroring.
    """

    id: str
    problem_class: str
    label: ParsedState
    prediction: ParsedState | None

    def __post_init__(self) -> None:
        if self.problem_class not in PROBLEM_CLASSES:
            raise ValueError(f"unknown problem class {self.problem_class!r}")


def applicable_columns(problem: PerceptionProblem) -> set[str]:
    """Sub-columns scored for this problem.

    The three universal columns always apply; chip columns apply to
    table-decision and outcome-judge problems; community cards only when
    the label has a visible board; showdown outcome only to
    outcome-judge problems.
    """
    columns = {"LS", "TO", "BI"}
    if problem.problem_class in CHIP_CLASSES:
        columns |= {"CB", "RCI", "OCI"}
        if len(problem.label.table.community_cards) in (3, 4, 5):
            columns.add("CC")
    if problem.problem_class == "outcome_judge":
        columns.add("SO")
    return columns


@dataclass(frozen=True)
class ColumnResult:
    """Per-column verdicts for one problem."""

    problem_id: str
    verdicts: dict[str, str]  # sub-column -> correct/incorrect/not_applicable
    overall: str

    def to_doc(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "overall": self.overall,
            **{col: self.verdicts[col] for col in SUB_COLUMNS},
        }


def _column_correct(column: str, label: ParsedState, pred: ParsedState) -> bool:
    lt, pt = label.table, pred.table
    if column == "LS":
        return pred.loop_stage == label.loop_stage
    if column == "TO":
        return pt.is_my_turn == lt.is_my_turn
    if column == "BI":
        return pred.blind == label.blind
    if column == "CC":
        return sorted(map(str, pt.community_cards)) == sorted(map(str, lt.community_cards))
    if column == "CB":
        return pt.my_current_bet == lt.my_current_bet and pt.opponent_bet == lt.opponent_bet
    if column == "RCI":
        return pt.my_chips == lt.my_chips
    if column == "OCI":
        return pt.opponent_chips == lt.opponent_chips
    if column == "SO":
        return pred.showdown_outcome == label.showdown_outcome
    raise ValueError(f"unknown column {column!r}")


def score_problem(problem: PerceptionProblem) -> ColumnResult:
    """Grade one problem; a missing prediction fails every applicable column."""
    applicable = applicable_columns(problem)
    verdicts: dict[str, str] = {}
    for column in SUB_COLUMNS:
        if column not in applicable:
            verdicts[column] = NOT_APPLICABLE
        elif problem.prediction is None:
            verdicts[column] = INCORRECT
        else:
            verdicts[column] = (
                CORRECT
                if _column_correct(column, problem.label, problem.prediction)
                else INCORRECT
            )
    overall = (
        CORRECT
        if all(verdicts[c] == CORRECT for c in applicable)
        else INCORRECT
    )
    return ColumnResult(problem_id=problem.id, verdicts=verdicts, overall=overall)


@dataclass(frozen=True)
class ColumnRate:
    correct: int
    applicable: int

    @property
    def pct(self) -> Fraction | None:
        if self.applicable == 0:
            return None
        return percent(self.correct, self.applicable)


@dataclass(frozen=True)
class RunReport:
    """Run-level aggregation: Overall, the eight columns, and Avg."""

    n_problems: int
    overall: ColumnRate
    columns: dict[str, ColumnRate]
    avg: Fraction

    def to_doc(self) -> dict:
        def pct_str(rate: ColumnRate) -> str | None:
            return fmt1(rate.pct) if rate.pct is not None else None

        return {
            "n_problems": self.n_problems,
            "overall": pct_str(self.overall),
            "columns": {
                col: {
                    "correct": rate.correct,
                    "applicable": rate.applicable,
                    "accuracy": pct_str(rate),
                }
                for col, rate in self.columns.items()
            },
            "avg": fmt1(self.avg),
        }


def aggregate_run(results: list[ColumnResult]) -> RunReport:
    """Fold per-problem verdicts into the run report.

    Sub-column accuracies are exact ratios over their applicable sets;
    Avg is the unweighted mean of the eight reported (one-decimal)
    sub-column percentages, so it is recomputable from the report.
    """
    if not results:
        raise EmptyRunError("no results to aggregate")
    overall = ColumnRate(
        correct=sum(1 for r in results if r.overall == CORRECT),
        applicable=len(results),
    )
    columns: dict[str, ColumnRate] = {}
    for column in SUB_COLUMNS:
        applicable = [r for r in results if r.verdicts[column] != NOT_APPLICABLE]
        columns[column] = ColumnRate(
            correct=sum(1 for r in applicable if r.verdicts[column] == CORRECT),
            applicable=len(applicable),
        )
    reported = [
        Fraction(fmt1(rate.pct))
        for rate in columns.values()
        if rate.pct is not None
    ]
    avg = mean(reported) if reported else Fraction(0)
    return RunReport(
        n_problems=len(results), overall=overall, columns=columns, avg=avg
    )


def average_reports(reports: list[RunReport]) -> dict:
    """Mean of several validation runs: unrounded means, rounded once."""
    if not reports:
        raise EmptyRunError("no reports to average")
    doc: dict = {"runs": len(reports)}
    doc["overall"] = fmt1(mean([r.overall.pct for r in reports]))
    for column in SUB_COLUMNS:
        pcts = [r.columns[column].pct for r in reports]
        if any(p is None for p in pcts):
            doc[column] = None
        else:
            doc[column] = fmt1(mean(pcts))
    doc["avg"] = fmt1(mean([r.avg for r in reports]))
    return doc


_ID_RE = re.compile(r"^p(\d+)$")


def load_problem_set(path: str | Path, strict: bool = False) -> list[PerceptionProblem]:
    """Load one problem per sub-directory of ``path``.

    Each problem directory holds ``label.json``, ``prediction.json``,
    and ``class.txt``. Ids are the directory names normalized to
    lowercase; ordering is numeric where possible, lexicographic
    otherwise. In lenient mode a bad prediction grades as incorrect;
    strict mode raises instead.
    """
    root = Path(path)
    problems: list[PerceptionProblem] = []
    seen: set[str] = set()

    def sort_key(p: Path) -> tuple:
        m = _ID_RE.match(p.name.lower())
        return (0, int(m.group(1))) if m else (1, p.name.lower())

    for entry in sorted((p for p in root.iterdir() if p.is_dir()), key=sort_key):
        pid = entry.name.strip().lower()
        if pid in seen:
            raise DuplicateIdError(pid)
        seen.add(pid)

        label_path = entry / "label.json"
        if not label_path.exists():
            raise MissingLabelError(str(label_path))
        try:
            label_doc = json.loads(label_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedDocumentError(f"{label_path}: {exc}") from None
        problems_found = parsed_schema_problems(label_doc)
        if problems_found:
            raise MalformedDocumentError(f"{label_path}: {problems_found}")
        label = ParsedState.from_doc(label_doc)

        class_path = entry / "class.txt"
        if not class_path.exists():
            raise MissingLabelError(str(class_path))
        problem_class = class_path.read_text(encoding="utf-8").strip()

        prediction = _load_prediction(entry / "prediction.json", strict)
        problems.append(
            PerceptionProblem(
                id=pid, problem_class=problem_class, label=label, prediction=prediction
            )
        )
    return problems


def _load_prediction(path: Path, strict: bool) -> ParsedState | None:
    if not path.exists():
        if strict:
            raise MalformedDocumentError(f"{path}: missing prediction")
        return None
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        if strict:
            raise MalformedDocumentError(f"{path}: {exc}") from None
        return None
    if parsed_schema_problems(doc):
        if strict:
            raise MalformedDocumentError(f"{path}: {parsed_schema_problems(doc)}")
        return None
    return ParsedState.from_doc(doc)


def evaluate_problem_set(path: str | Path, strict: bool = False) -> tuple[list[ColumnResult], RunReport]:
    problems = load_problem_set(path, strict=strict)
    results = [score_problem(p) for p in problems]
    return results, aggregate_run(results)
