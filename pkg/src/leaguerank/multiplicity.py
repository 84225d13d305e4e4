"""Benjamini-Hochberg step-up adjustment."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from leaguerank.config import BHScope
from leaguerank.errors import DataError


@dataclass(frozen=True)
class PValueFamily:
    entries: tuple[tuple[Hashable, float], ...]
    scope: BHScope = BHScope.GLOBAL

    def __post_init__(self) -> None:
        entries = tuple((k, float(p)) for k, p in self.entries)
        keys = [k for k, _ in entries]
        if len(set(keys)) != len(keys):
            raise DataError("p-value family keys must be unique")
        for k, p in entries:
            if not (0.0 <= p <= 1.0):
                raise DataError(f"p-value for {k!r} outside [0, 1]: {p}")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "scope", BHScope(self.scope))

    @classmethod
    def from_mapping(cls, pvals: Mapping[Hashable, float], scope: BHScope = BHScope.GLOBAL) -> PValueFamily:
        return cls(tuple(pvals.items()), scope)


def bh_adjust(family: PValueFamily | Iterable[tuple[Hashable, float]]) -> dict[Hashable, float]:
    """Adjusted p-values ``min_{j>=i} min(1, m * p_(j) / j)``, keyed like the input.

    Ties are ordered by key so the result does not depend on input order.
    Each ``m * p / j`` is computed exactly and rounded once.
    """
    if not isinstance(family, PValueFamily):
        family = PValueFamily(tuple(family))
    if not family.entries:
        raise DataError("p-value family is empty")
    keys = [k for k, _ in family.entries]
    p = np.array([v for _, v in family.entries])
    m = p.size
    # sort on (p, key); keys of mixed types fall back to their repr
    try:
        order = sorted(range(m), key=lambda i: (p[i], keys[i]))
    except TypeError:
        order = sorted(range(m), key=lambda i: (p[i], repr(keys[i])))
    # m * p / j in exact arithmetic, rounded once, so adjusted >= raw always
    scaled = np.array([float(Fraction(p[i]) * m / j) for j, i in enumerate(order, start=1)])
    adjusted_sorted = np.minimum(np.minimum.accumulate(scaled[::-1])[::-1], 1.0)
    adjusted = np.empty(m)
    adjusted[order] = adjusted_sorted
    return {k: float(a) for k, a in zip(keys, adjusted)}
