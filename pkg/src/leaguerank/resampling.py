"""Seeded pooled-bootstrap null distribution of the mean-difference statistic.

One null is built per unordered algorithm pair and problem. The reverse
direction uses the same replicates negated, so the two directions of a match
can never both reject at alpha < 0.5.
"""

from __future__ import annotations

import hashlib
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from leaguerank.errors import ConfigError, DataError

# Upper bound on resampled values held in memory at once.
_CHUNK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class ComparisonSeed:
    """Identity of one comparison, used to derive its random substream.

    The derived seed depends only on the master seed, the problem and the
    unordered pair, never on scheduling order.
    """

    master_seed: int
    problem: str
    pair: tuple[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pair", tuple(sorted(self.pair)))

    def digest(self) -> int:
        """Stable 64-bit BLAKE2b digest of (problem, sorted pair)."""
        msg = "\x1f".join((self.problem, *self.pair)).encode("utf-8")
        return int.from_bytes(hashlib.blake2b(msg, digest_size=8).digest(), "big")

    def derive(self) -> int:
        ss = np.random.SeedSequence([int(self.master_seed), self.digest()])
        return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class BootstrapNull:
    """Sorted bootstrap replicates of mean(first n_i) - mean(last n_j)."""

    replicates: np.ndarray
    n_i: int
    n_j: int
    seed_used: int

    def __post_init__(self) -> None:
        reps = np.array(self.replicates, dtype=float)
        if reps.ndim != 1 or reps.size == 0:
            raise ValueError("replicates must be a non-empty 1-d sequence")
        reps.sort(kind="stable")
        reps.setflags(write=False)
        object.__setattr__(self, "replicates", reps)

    @property
    def n_b(self) -> int:
        return int(self.replicates.size)

    def flipped(self) -> BootstrapNull:
        """Null for the reverse direction: replicates negated and re-sorted."""
        return BootstrapNull(-self.replicates[::-1], self.n_j, self.n_i, self.seed_used)

    def count_ge(self, x: float) -> int:
        return self.n_b - int(np.searchsorted(self.replicates, x, side="left"))

    def count_le(self, x: float) -> int:
        return int(np.searchsorted(self.replicates, x, side="right"))

    def to_csv(self, path: str | Path) -> Path:
        """Debug dump, one ``t_star`` column."""
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write("t_star\n")
            for v in self.replicates:
                fh.write(f"{float(v)!r}\n")
        return path


def _as_sample(values: Sequence[float] | np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise DataError(f"{name} is empty")
    return arr


def observed_stat(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    """mean(sample_a) - mean(sample_b)."""
    a = _as_sample(sample_a, "sample_a")
    b = _as_sample(sample_b, "sample_b")
    return float(a.mean() - b.mean())


def pooled_null(
    sample_a: Sequence[float],
    sample_b: Sequence[float],
    n_b: int,
    seed: ComparisonSeed | int,
) -> BootstrapNull:
    """Build the pooled-bootstrap null for ``mean(a) - mean(b)``.

    Each replicate draws ``len(a) + len(b)`` values with replacement from the
    merged samples and takes the mean of the first ``len(a)`` minus the mean of
    the rest.
    """
    a = _as_sample(sample_a, "sample_a")
    b = _as_sample(sample_b, "sample_b")
    if int(n_b) != n_b or n_b < 1:
        raise ConfigError(f"n_b must be a positive integer, got {n_b}")
    n_b = int(n_b)
    seed_used = seed.derive() if isinstance(seed, ComparisonSeed) else int(seed)

    pooled = np.concatenate([a, b])
    n_a, total = a.size, pooled.size
    if np.all(pooled == pooled[0]):
        return BootstrapNull(np.zeros(n_b), a.size, b.size, seed_used)

    rng = np.random.Generator(np.random.PCG64(seed_used))
    out = np.empty(n_b)
    rows = max(1, _CHUNK_ELEMENTS // total)
    for start in range(0, n_b, rows):
        stop = min(n_b, start + rows)
        draws = pooled[rng.integers(0, total, size=(stop - start, total))]
        out[start:stop] = draws[:, :n_a].mean(axis=1) - draws[:, n_a:].mean(axis=1)
    return BootstrapNull(out, a.size, b.size, seed_used)


def p_value(null: BootstrapNull, t_obs: float) -> float:
    """Fraction of replicates at or above ``t_obs``. May be exactly 0."""
    return null.count_ge(t_obs) / null.n_b


def order_index(q: float, n: int) -> int:
    """1-based rank ceil(q * n), with q taken at its shortest decimal value.

    Using the decimal literal avoids 0.8 * 5 rounding to 4.000000000000001.
    """
    if not (0.0 < q <= 1.0):
        raise ConfigError(f"quantile level must be in (0, 1], got {q}")
    return max(1, math.ceil(Fraction(repr(float(q))) * n))


def quantile(null: BootstrapNull, q: float) -> float:
    """Smallest replicate whose empirical CDF is >= q."""
    return float(null.replicates[order_index(q, null.n_b) - 1])
