"""Published reference data shipped with the benchmark.

Holds the measured per-policy outcome counts and rates, the per-group
rate breakdown, the per-perceiver column accuracies, the case-study
trajectory counter summaries, the evaluator's column applicability map,
and access to the verbatim trajectory label logs. These numbers are
measurements of external systems; they parameterize simulation profiles
and golden tests, never claims about this artifact.
"""

from __future__ import annotations

from importlib import resources

# (SP, DC, TF, DF) counts over the 80-trial primitive evaluation schedule
POLICY_OUTCOMES: dict[str, tuple[int, int, int, int]] = {
    "pi05": (38, 11, 31, 0),
    "pi0": (38, 8, 33, 1),
    "rdt": (24, 13, 40, 3),
    "dp-dino": (21, 8, 48, 3),
    "dp-transformer": (11, 5, 46, 18),
    "rdt-small": (11, 3, 59, 7),
    "act": (8, 4, 67, 1),
    "baku": (5, 5, 67, 3),
    "dp-unet": (1, 0, 79, 0),
}

# published aggregate rates as printed (SPSR, TCR)
POLICY_RATES: dict[str, tuple[str, str]] = {
    "pi05": ("47.5", "61.2"),
    "pi0": ("47.5", "57.5"),
    "rdt": ("30.0", "46.2"),
    "dp-dino": ("26.2", "36.2"),
    "dp-transformer": ("13.8", "20.0"),
    "rdt-small": ("13.8", "17.5"),
    "act": ("10.0", "15.0"),
    "baku": ("6.2", "12.5"),
    "dp-unet": ("1.2", "1.2"),
}

PRIMITIVE_GROUPS: dict[str, tuple[str, ...]] = {
    "pickup": ("pick_up_left", "pick_up_right"),
    "chip_push": ("push_5", "push_10", "push_50", "push_100"),
    "chip_pull": ("pull_5", "pull_10", "pull_50", "pull_100"),
    "put_down_show": ("put_down_left", "put_down_right", "show_left", "show_right"),
}

GROUP_ORDER = ("pickup", "chip_push", "chip_pull", "put_down_show")

# published per-group (SPSR, TCR) in percent over 20 trials each,
# plus the 80-trial overall pair
GROUP_RATES: dict[str, dict[str, tuple[float, float]]] = {
    "pi05": {
        "pickup": (100.0, 100.0),
        "chip_push": (25.0, 35.0),
        "chip_pull": (15.0, 30.0),
        "put_down_show": (50.0, 80.0),
        "overall": (47.5, 61.2),
    },
    "pi0": {
        "pickup": (100.0, 100.0),
        "chip_push": (25.0, 30.0),
        "chip_pull": (15.0, 20.0),
        "put_down_show": (50.0, 80.0),
        "overall": (47.5, 57.5),
    },
    "rdt": {
        "pickup": (75.0, 80.0),
        "chip_push": (15.0, 25.0),
        "chip_pull": (5.0, 10.0),
        "put_down_show": (25.0, 70.0),
        "overall": (30.0, 46.2),
    },
    "dp-dino": {
        "pickup": (50.0, 50.0),
        "chip_push": (25.0, 45.0),
        "chip_pull": (10.0, 20.0),
        "put_down_show": (20.0, 30.0),
        "overall": (26.2, 36.2),
    },
    "dp-transformer": {
        "pickup": (25.0, 25.0),
        "chip_push": (10.0, 15.0),
        "chip_pull": (15.0, 20.0),
        "put_down_show": (5.0, 20.0),
        "overall": (13.8, 20.0),
    },
    "rdt-small": {
        "pickup": (25.0, 25.0),
        "chip_push": (15.0, 20.0),
        "chip_pull": (5.0, 5.0),
        "put_down_show": (10.0, 20.0),
        "overall": (13.8, 17.5),
    },
    "act": {
        "pickup": (25.0, 30.0),
        "chip_push": (5.0, 5.0),
        "chip_pull": (0.0, 0.0),
        "put_down_show": (10.0, 25.0),
        "overall": (10.0, 15.0),
    },
    "baku": {
        "pickup": (20.0, 30.0),
        "chip_push": (0.0, 0.0),
        "chip_pull": (0.0, 10.0),
        "put_down_show": (5.0, 10.0),
        "overall": (6.2, 12.5),
    },
    "dp-unet": {
        "pickup": (0.0, 0.0),
        "chip_push": (0.0, 0.0),
        "chip_pull": (5.0, 5.0),
        "put_down_show": (0.0, 0.0),
        "overall": (1.2, 1.2),
    },
}

PERCEPTION_COLUMNS = ("overall", "LS", "TO", "BI", "CC", "CB", "RCI", "OCI", "SO", "avg")

# per-perceiver accuracies in the evaluator's column order
PERCEIVER_ACCURACY: dict[str, dict[str, float]] = {
    "gpt55": {
        "overall": 31.5, "LS": 72.2, "TO": 80.6, "BI": 100.0, "CC": 61.5,
        "CB": 45.8, "RCI": 62.5, "OCI": 35.4, "SO": 76.2, "avg": 66.8,
    },
    "gpt54": {
        "overall": 31.5, "LS": 65.7, "TO": 93.5, "BI": 100.0, "CC": 23.1,
        "CB": 31.2, "RCI": 56.2, "OCI": 18.8, "SO": 47.6, "avg": 54.5,
    },
    "gpt54-mini": {
        "overall": 25.9, "LS": 56.5, "TO": 94.4, "BI": 99.1, "CC": 33.3,
        "CB": 14.6, "RCI": 29.2, "OCI": 18.8, "SO": 47.6, "avg": 49.2,
    },
    "opus47": {
        "overall": 34.3, "LS": 43.5, "TO": 93.5, "BI": 100.0, "CC": 43.6,
        "CB": 31.2, "RCI": 37.5, "OCI": 43.8, "SO": 0.0, "avg": 49.1,
    },
    "sonnet46": {
        "overall": 25.0, "LS": 46.3, "TO": 88.0, "BI": 100.0, "CC": 23.1,
        "CB": 10.4, "RCI": 29.2, "OCI": 22.9, "SO": 14.3, "avg": 41.8,
    },
    "haiku45": {
        "overall": 13.9, "LS": 47.2, "TO": 68.5, "BI": 91.7, "CC": 35.9,
        "CB": 12.5, "RCI": 25.0, "OCI": 18.8, "SO": 0.0, "avg": 37.4,
    },
    "gemini3-flash": {
        "overall": 20.4, "LS": 63.9, "TO": 77.8, "BI": 100.0, "CC": 28.2,
        "CB": 18.8, "RCI": 29.2, "OCI": 22.9, "SO": 71.4, "avg": 51.5,
    },
    "gemini31-flash-lite": {
        "overall": 10.2, "LS": 27.8, "TO": 73.1, "BI": 94.4, "CC": 28.2,
        "CB": 12.5, "RCI": 22.9, "OCI": 14.6, "SO": 0.0, "avg": 34.2,
    },
}

# published counters for the three released case-study trajectories
TRAJECTORY_COUNTERS: dict[str, dict[str, object]] = {
    "i": {
        "states": 22, "ap": 8, "dpp": 7, "wa": 7, "hl": 2, "rc": 1,
        "lap": "view_card(L)", "ldp": "pick_up_left",
    },
    "ii": {
        "states": 54, "ap": 13, "dpp": 22, "wa": 26, "hl": 0, "rc": 1,
        "lap": "collect_winnings", "ldp": "push_100",
    },
    "iii": {
        "states": 23, "ap": 8, "dpp": 10, "wa": 7, "hl": 0, "rc": 1,
        "lap": "call", "ldp": "pick_up_left",
    },
}

# problem-id applicability per evaluator column on the 36-problem set
_CHIP_IDS = (
    "p9", "p11", "p13", "p14", "p18", "p19", "p20", "p23",
    "p26", "p27", "p30", "p31", "p32", "p33", "p35", "p36",
)
_CC_IDS = (
    "p13", "p14", "p18", "p19", "p20", "p23", "p27",
    "p30", "p31", "p32", "p33", "p35", "p36",
)
_SO_IDS = ("p19", "p23", "p30", "p31", "p32", "p33", "p36")
_ALL_IDS = tuple(f"p{i}" for i in range(1, 37))

COLUMN_APPLICABILITY: dict[str, tuple[str, ...]] = {
    "overall": _ALL_IDS,
    "LS": _ALL_IDS,
    "TO": _ALL_IDS,
    "BI": _ALL_IDS,
    "CC": _CC_IDS,
    "CB": _CHIP_IDS,
    "RCI": _CHIP_IDS,
    "OCI": _CHIP_IDS,
    "SO": _SO_IDS,
}

OUTCOME_JUDGE_IDS = _SO_IDS
TABLE_DECISION_IDS = tuple(i for i in _CHIP_IDS if i not in _SO_IDS)


def trajectory_labels(which: str) -> list[str]:
    """The verbatim per-state label log for trajectory ``i``/``ii``/``iii``."""
    if which not in ("i", "ii", "iii"):
        raise ValueError(f"unknown trajectory {which!r}")
    text = (
        resources.files("holdemloop.data")
        .joinpath(f"trajectory_{which}.labels")
        .read_text(encoding="utf-8")
    )
    return [line for line in text.splitlines() if line.strip()]


def problem_set_path() -> str:
    """Filesystem path of the shipped 36-problem reference set."""
    return str(resources.files("holdemloop.data").joinpath("problems"))
