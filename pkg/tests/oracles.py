"""Independent reference implementations used only by the tests.

These deliberately share no code with the package: the five-card
categorizer is written from first principles and the seven-card rank is
the max over all 21 five-card subsets; the chip splitter enumerates
every feasible multiset. They define what "correct" means for the
fast paths they check.
"""

from __future__ import annotations

import random
from itertools import combinations

from holdemloop.tabletop import Card, ChipCount, full_deck

VALUE = {r: v for v, r in enumerate("23456789", start=2)}
VALUE.update({"10": 10, "J": 11, "Q": 12, "K": 13, "A": 14})


def naive_five_rank(cards: list[Card]) -> tuple:
    """Rank of exactly five cards: (category, tiebreaks...)."""
    assert len(cards) == 5
    values = sorted((VALUE[c.rank] for c in cards), reverse=True)
    is_flush = len({c.suit for c in cards}) == 1

    straight_high = None
    if len(set(values)) == 5:
        if values[0] - values[4] == 4:
            straight_high = values[0]
        elif values == [14, 5, 4, 3, 2]:  # wheel
            straight_high = 5

    groups: dict[int, int] = {}
    for v in values:
        groups[v] = groups.get(v, 0) + 1
    by_size = sorted(groups.items(), key=lambda kv: (kv[1], kv[0]), reverse=True)
    sizes = sorted(groups.values(), reverse=True)

    if is_flush and straight_high is not None:
        return (8, straight_high)
    if sizes == [4, 1]:
        quad = by_size[0][0]
        kicker = by_size[1][0]
        return (7, quad, kicker)
    if sizes == [3, 2]:
        return (6, by_size[0][0], by_size[1][0])
    if is_flush:
        return (5, *values)
    if straight_high is not None:
        return (4, straight_high)
    if sizes == [3, 1, 1]:
        trips = by_size[0][0]
        kickers = sorted((v for v in values if v != trips), reverse=True)
        return (3, trips, *kickers)
    if sizes == [2, 2, 1]:
        p1, p2 = by_size[0][0], by_size[1][0]
        kicker = next(v for v in values if v != p1 and v != p2)
        return (2, p1, p2, kicker)
    if sizes == [2, 1, 1, 1]:
        pair = by_size[0][0]
        kickers = sorted((v for v in values if v != pair), reverse=True)
        return (1, pair, *kickers)
    return (0, *values)


def brute_force_seven_rank(cards: list[Card]) -> tuple:
    """Best five-card rank over all 21 subsets of seven cards."""
    assert len(cards) == 7
    return max(naive_five_rank(list(combo)) for combo in combinations(cards, 5))


def min_count_split(delta: int, inventory: ChipCount) -> int | None:
    """Exhaustive minimum chip count summing to delta, or None."""
    if delta < 0:
        return None
    best: int | None = None
    max100 = min(inventory.get(100), delta // 100)
    for n100 in range(max100 + 1):
        r100 = delta - 100 * n100
        max50 = min(inventory.get(50), r100 // 50)
        for n50 in range(max50 + 1):
            r50 = r100 - 50 * n50
            max10 = min(inventory.get(10), r50 // 10)
            for n10 in range(max10 + 1):
                r10 = r50 - 10 * n10
                if r10 % 5 != 0:
                    continue
                n5 = r10 // 5
                if n5 > inventory.get(5):
                    continue
                total = n100 + n50 + n10 + n5
                if best is None or total < best:
                    best = total
    return best


def monte_carlo_win_prob(
    hole: list[Card], board: list[Card], trials: int, seed: int
) -> float:
    """Independent strict-win estimate using the brute-force ranker."""
    rng = random.Random(seed)
    used = set(hole) | set(board)
    pool = [c for c in full_deck() if c not in used]
    to_come = 5 - len(board)
    wins = 0
    for _ in range(trials):
        draw = rng.sample(pool, 2 + to_come)
        full_board = list(board) + draw[2:]
        mine = brute_force_seven_rank(list(hole) + full_board)
        theirs = brute_force_seven_rank(draw[:2] + full_board)
        if mine > theirs:
            wins += 1
    return wins / trials
