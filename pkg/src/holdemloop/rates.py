"""Exact percentage arithmetic with round-half-to-even display rounding.

All rate math runs in exact rationals; rounding to one decimal happens
only at report emission. Half-to-even at the boundary is the single rule
that reproduces every published reference rate (e.g. 49/80 -> 61.2).
"""

from __future__ import annotations

from fractions import Fraction


def percent(numerator: int, denominator: int) -> Fraction:
    """Exact percentage as a rational."""
    if denominator <= 0:
        raise ZeroDivisionError("percentage of an empty set")
    return Fraction(numerator * 100, denominator)


def round1(value: Fraction | float) -> float:
    """Round to one decimal, ties to even, exactly."""
    frac = Fraction(value) if not isinstance(value, Fraction) else value
    scaled = frac * 10
    floor = scaled.numerator // scaled.denominator
    remainder = scaled - floor
    if remainder > Fraction(1, 2):
        floor += 1
    elif remainder == Fraction(1, 2) and floor % 2 != 0:
        floor += 1
    return floor / 10


def fmt1(value: Fraction | float) -> str:
    """One-decimal display string, e.g. ``61.2``."""
    return f"{round1(value):.1f}"


def mean(values: list[Fraction] | list[float]) -> Fraction:
    if not values:
        raise ZeroDivisionError("mean of an empty list")
    return sum((Fraction(v) for v in values), Fraction(0)) / len(values)
