"""Deterministic response strategies for local-hidden-state models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

MAX_STRATEGIES = 4096


@dataclass(frozen=True)
class DeterministicStrategy:
    """One deterministic assignment of an outcome to every setting.

    ``outcomes[x]`` is the outcome this strategy answers for setting x.
    The index encodes the outcomes base-o with the first setting as the
    most significant digit: index 5 with 2 outcomes and 3 settings means
    outcomes (1, 0, 1).
    """

    index: int
    outcomes: Tuple[int, ...]

    def selects(self, outcome: int, setting: int) -> bool:
        return self.outcomes[setting] == outcome


def enumerate_strategies(n_settings: int, n_outcomes: int) -> List[DeterministicStrategy]:
    """All n_outcomes^n_settings deterministic strategies, index order."""
    if n_settings < 1 or n_outcomes < 1:
        raise ValueError("need at least one setting and one outcome")
    total = n_outcomes ** n_settings
    if total > MAX_STRATEGIES:
        raise ValueError(
            f"{n_outcomes}^{n_settings} = {total} strategies exceeds the "
            f"cap of {MAX_STRATEGIES}; this is past any sensible witness")
    out = []
    for index in range(total):
        digits = []
        rem = index
        for pos in range(n_settings - 1, -1, -1):
            base = n_outcomes ** pos
            digits.append(rem // base)
            rem %= base
        out.append(DeterministicStrategy(index, tuple(digits)))
    return out
