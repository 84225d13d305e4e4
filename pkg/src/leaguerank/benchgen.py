"""Toy fixed-target benchmark data.

OneMax and LeadingOnes on bit strings, three classic heuristics, and a runner
that records the number of fitness evaluations until the target fitness is
first reached, capped at the budget. The initial solution counts as one
evaluation and every offspring costs one, even if identical to its parent.
"""

from __future__ import annotations

import hashlib
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from leaguerank.data import RunMatrix
from leaguerank.errors import ConfigError

_RS_BATCH = 4096


class ProblemKind(str, Enum):
    ONEMAX = "onemax"
    LEADINGONES = "leadingones"


class HeuristicKind(str, Enum):
    RLS = "rls"
    ONE_PLUS_ONE_EA = "one_plus_one_ea"
    RANDOM_SEARCH = "random_search"


@dataclass(frozen=True)
class ProblemSpec:
    kind: ProblemKind
    dimension: int
    target: int | None = None

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", ProblemKind(self.kind))
        except ValueError:
            raise ConfigError(f"unknown problem {self.kind!r}") from None
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ConfigError(f"dimension must be a positive integer, got {self.dimension}")
        if self.target is None:
            object.__setattr__(self, "target", int(self.dimension))
        if not (1 <= self.target <= self.dimension):
            raise ConfigError(f"target must be in [1, dimension={self.dimension}], got {self.target}")

    @property
    def label(self) -> str:
        base = f"{self.kind.value}_d{self.dimension}"
        return base if self.target == self.dimension else f"{base}_t{self.target}"

    def fitness(self, x: np.ndarray) -> np.ndarray | int:
        """Fitness of one bit string (1-d) or a batch of them (2-d, one per row)."""
        if self.kind is ProblemKind.ONEMAX:
            return x.sum(axis=-1)
        # leading ones: length of the all-ones prefix
        return np.cumprod(x, axis=-1).sum(axis=-1)


@dataclass(frozen=True)
class HeuristicSpec:
    kind: HeuristicKind
    mutation_rate: float | None = None

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", HeuristicKind(self.kind))
        except ValueError:
            raise ConfigError(f"unknown heuristic {self.kind!r}") from None
        if self.mutation_rate is not None:
            if self.kind is not HeuristicKind.ONE_PLUS_ONE_EA:
                raise ConfigError("mutation_rate only applies to one_plus_one_ea")
            if not (0.0 < self.mutation_rate < 1.0):
                raise ConfigError(f"mutation_rate must be in (0, 1), got {self.mutation_rate}")

    @property
    def label(self) -> str:
        if self.mutation_rate is None:
            return self.kind.value
        return f"{self.kind.value}_p{self.mutation_rate:g}"


@dataclass(frozen=True)
class TrialResult:
    evaluations_to_target: int
    hit: bool


def _elitist(problem: ProblemSpec, heuristic: HeuristicSpec, budget: int, rng: np.random.Generator) -> TrialResult:
    n = problem.dimension
    x = rng.integers(0, 2, size=n, dtype=np.int8)
    fx = int(problem.fitness(x))
    evals = 1
    if fx >= problem.target:
        return TrialResult(evals, True)
    rate = heuristic.mutation_rate if heuristic.mutation_rate is not None else 1.0 / n
    rls = heuristic.kind is HeuristicKind.RLS
    while evals < budget:
        y = x.copy()
        if rls:
            i = rng.integers(n)
            y[i] ^= 1
        else:
            flips = rng.random(n) < rate
            y[flips] ^= 1
        fy = int(problem.fitness(y))
        evals += 1
        if fy >= fx:
            x, fx = y, fy
            if fx >= problem.target:
                return TrialResult(evals, True)
    return TrialResult(budget, False)


def _random_search(problem: ProblemSpec, budget: int, rng: np.random.Generator) -> TrialResult:
    # uniform sampling without replacement: revisited points are skipped
    # and not counted
    n = problem.dimension
    seen: set[bytes] = set()
    evals = 0
    while True:
        batch = rng.integers(0, 2, size=(_RS_BATCH, n), dtype=np.int8)
        fits = problem.fitness(batch)
        packed = np.packbits(batch.astype(np.uint8), axis=1)
        for row, fit in zip(packed, fits):
            key = row.tobytes()
            if key in seen:
                continue
            seen.add(key)
            evals += 1
            if fit >= problem.target:
                return TrialResult(evals, True)
            if evals >= budget:
                return TrialResult(budget, False)


def run_trial(
    problem: ProblemSpec,
    heuristic: HeuristicSpec,
    budget: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> TrialResult:
    """Evaluations until ``problem.target`` is reached, or ``budget`` if it never is."""
    if int(budget) != budget or budget < 1:
        raise ConfigError(f"budget must be a positive integer, got {budget}")
    budget = int(budget)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if heuristic.kind is HeuristicKind.RANDOM_SEARCH:
        return _random_search(problem, budget, rng)
    return _elitist(problem, heuristic, budget, rng)


def trial_seed(master_seed: int, problem: ProblemSpec, heuristic: HeuristicSpec, run: int) -> np.random.SeedSequence:
    msg = f"{problem.label}\x1f{heuristic.label}".encode()
    digest = int.from_bytes(hashlib.blake2b(msg, digest_size=8).digest(), "big")
    return np.random.SeedSequence([int(master_seed), digest, int(run)])


def generate_matrix(
    problems: Sequence[ProblemSpec],
    heuristics: Sequence[HeuristicSpec],
    runs: int,
    budget: int,
    master_seed: int,
) -> RunMatrix:
    """Full-design RunMatrix keyed by heuristic and problem labels."""
    if int(runs) != runs or runs < 1:
        raise ConfigError(f"runs must be a positive integer, got {runs}")
    if not problems or not heuristics:
        raise ConfigError("need at least one problem and one heuristic")
    for name, labels in (
        ("problem", [p.label for p in problems]),
        ("heuristic", [h.label for h in heuristics]),
    ):
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate {name} specs")
    entries = {}
    for prob in problems:
        for heur in heuristics:
            entries[(heur.label, prob.label)] = [
                run_trial(prob, heur, budget, trial_seed(master_seed, prob, heur, r)).evaluations_to_target
                for r in range(1, int(runs) + 1)
            ]
    return RunMatrix(entries, budget=float(budget))
