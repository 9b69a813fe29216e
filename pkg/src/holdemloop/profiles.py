"""Named outcome and noise profiles.

Outcome profiles inherit the measured per-policy rates (aggregate over
all primitives, or per primitive group); noise profiles invert the
measured per-perceiver field accuracies into error rates. Group-level
failure splits are not published, so group profiles book the non-success
remainder as retryable task failure.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import reference
from .perceive import CHALLENGE_FIELDS, NOISELESS, NoiseProfile
from .policy import ALWAYS_SP, OutcomeProfile, Quad
from .tabletop import canonical_dumps


def _aggregate_quad(counts: tuple[int, int, int, int]) -> Quad:
    n = sum(counts)
    return tuple(c / n for c in counts)  # type: ignore[return-value]


def _group_quad(spsr: float, tcr: float) -> Quad:
    p_sp = spsr / 100.0
    p_dc = (tcr - spsr) / 100.0
    return (p_sp, p_dc, 1.0 - p_sp - p_dc, 0.0)


def _build_outcome_profiles() -> dict[str, OutcomeProfile]:
    profiles: dict[str, OutcomeProfile] = {
        "always-sp": OutcomeProfile(name="always-sp", default=ALWAYS_SP),
    }
    for policy, counts in reference.POLICY_OUTCOMES.items():
        profiles[f"{policy}-aggregate"] = OutcomeProfile(
            name=f"{policy}-aggregate", default=_aggregate_quad(counts)
        )
    for policy, groups in reference.GROUP_RATES.items():
        per_primitive: dict[str, Quad] = {}
        for group, primitives in reference.PRIMITIVE_GROUPS.items():
            quad = _group_quad(*groups[group])
            for prim in primitives:
                per_primitive[prim] = quad
        profiles[f"{policy}-groups"] = OutcomeProfile(
            name=f"{policy}-groups",
            default=_aggregate_quad(reference.POLICY_OUTCOMES[policy]),
            per_primitive=per_primitive,
        )
    return profiles


def _build_noise_profiles() -> dict[str, NoiseProfile]:
    profiles: dict[str, NoiseProfile] = {"noiseless": NOISELESS}
    for perceiver, columns in reference.PERCEIVER_ACCURACY.items():
        rates = {
            field: round(1.0 - columns[field] / 100.0, 10)
            for field in CHALLENGE_FIELDS
            if columns[field] < 100.0
        }
        profiles[f"{perceiver}-like"] = NoiseProfile(
            name=f"{perceiver}-like", rates=rates
        )
    return profiles


OUTCOME_PROFILES = _build_outcome_profiles()
NOISE_PROFILES = _build_noise_profiles()


def outcome_profile(name: str) -> OutcomeProfile:
    try:
        return OUTCOME_PROFILES[name]
    except KeyError:
        raise KeyError(
            f"unknown outcome profile {name!r}; known: {sorted(OUTCOME_PROFILES)}"
        ) from None


def noise_profile(name: str) -> NoiseProfile:
    try:
        return NOISE_PROFILES[name]
    except KeyError:
        raise KeyError(
            f"unknown noise profile {name!r}; known: {sorted(NOISE_PROFILES)}"
        ) from None


def write_profile_file(path: str | Path) -> None:
    """Dump every named profile to one canonical document."""
    doc = {
        "outcome_profiles": {k: v.to_doc() for k, v in sorted(OUTCOME_PROFILES.items())},
        "noise_profiles": {k: v.to_doc() for k, v in sorted(NOISE_PROFILES.items())},
    }
    Path(path).write_text(canonical_dumps(doc, pretty=True), encoding="utf-8")


def load_profile_file(path: str | Path) -> tuple[dict[str, OutcomeProfile], dict[str, NoiseProfile]]:
    """Load user-supplied profiles; they shadow the built-ins by name."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    outcomes = {
        name: OutcomeProfile.from_doc(body)
        for name, body in doc.get("outcome_profiles", {}).items()
    }
    noises = {
        name: NoiseProfile.from_doc(body)
        for name, body in doc.get("noise_profiles", {}).items()
    }
    return outcomes, noises
