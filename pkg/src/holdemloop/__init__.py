"""Deterministic closed-loop simulator and evaluation suite for a
dexterous heads-up hold'em tabletop agent."""

from .tabletop import (
    Card,
    ChipCount,
    LoopStage,
    OutcomeLevel,
    TableConfig,
    TableState,
    chip_value,
    new_initial_table,
    validate_state,
)
from .poker import evaluate_hand, judge_showdown, legal_actions
from .translate import split_chips, translate
from .router import Budgets, Gate, SessionContext, route
from .session import SessionConfig, classify_failure, run_hand

__version__ = "0.1.0"

__all__ = [
    "Budgets",
    "Card",
    "ChipCount",
    "Gate",
    "LoopStage",
    "OutcomeLevel",
    "SessionConfig",
    "SessionContext",
    "TableConfig",
    "TableState",
    "chip_value",
    "classify_failure",
    "evaluate_hand",
    "judge_showdown",
    "legal_actions",
    "new_initial_table",
    "route",
    "run_hand",
    "split_chips",
    "translate",
    "validate_state",
]
