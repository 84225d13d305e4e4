"""The tournament: every ordered pair of algorithms on every problem.

In the comparison (opponent, candidate) the statistic is
``t_obs = mean(opponent) - mean(candidate)``. Values are costs to minimize, so
a rejection of ``H0: t <= 0`` is a win for the candidate.

Execution is two-pass. All raw p-values are computed first, adjusted together
with Benjamini-Hochberg, and only then are decisions, supported discrepancies
and points derived. The sensitivity sweep reuses the first pass.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from leaguerank.config import BHScope, RankingConfig
from leaguerank.data import RunMatrix, has_errors, validate
from leaguerank.errors import ConfigError, DataError
from leaguerank.multiplicity import PValueFamily, bh_adjust
from leaguerank.resampling import BootstrapNull, ComparisonSeed, observed_stat, p_value, pooled_null
from leaguerank.severity import Decision, supported_delta

THREADS_ENV = "LEAGUERANK_THREADS"

Key = tuple[str, str, str]  # (problem, candidate, opponent)


@dataclass(frozen=True)
class PairwiseOutcome:
    candidate: str
    opponent: str
    problem: str
    t_obs: float
    p_raw: float
    p_adj: float
    decision: Decision
    delta_star: float
    points: int
    gd: int

    @property
    def key(self) -> Key:
        return (self.problem, self.candidate, self.opponent)


@dataclass(frozen=True)
class DecidedComparison:
    """First-pass result of one ordered comparison: everything but the scoring."""

    candidate: str
    opponent: str
    problem: str
    t_obs: float
    p_raw: float
    p_adj: float
    decision: Decision
    null: BootstrapNull = field(repr=False, compare=False)

    def score(self, severity_s: float, delta_p: float) -> PairwiseOutcome:
        delta_star = supported_delta(self.null, self.t_obs, severity_s, self.decision)
        points, gd = score_comparison(self.decision, delta_star, delta_p)
        return PairwiseOutcome(
            self.candidate,
            self.opponent,
            self.problem,
            self.t_obs,
            self.p_raw,
            self.p_adj,
            self.decision,
            delta_star,
            points,
            gd,
        )


def score_comparison(decision: Decision, delta_star: float, delta_p: float) -> tuple[int, int]:
    """Points and goal difference of one ordered comparison.

    A win needs ``delta_star`` strictly above ``delta_p`` for 3 points; at or
    below it a rejection earns 1 point and no goals. A non-rejection never
    earns positive goal difference.
    """
    if not (math.isfinite(delta_p) and delta_p > 0):
        raise ConfigError(f"delta_p must be finite and positive, got {delta_p}")
    ratio = math.floor(delta_star / delta_p)
    if Decision(decision) is Decision.REJECT:
        if delta_star > delta_p:
            return 3, ratio
        return 1, 0
    return 0, min(ratio, 0)


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    return threads


def check_design(matrix: RunMatrix) -> None:
    diagnostics = validate(matrix)
    if has_errors(diagnostics):
        raise DataError("; ".join(d.message for d in diagnostics if d.level == "error"))
    if len(matrix.algorithms) < 2:
        raise DataError("a tournament needs at least two algorithms")


def build_nulls(
    matrix: RunMatrix, config: RankingConfig, threads: int | None = None
) -> dict[tuple[str, str, str], BootstrapNull]:
    """One pooled null per (problem, a, b) with a < b, for ``mean(a) - mean(b)``."""
    jobs = [
        (prob, a, b)
        for prob in matrix.problems
        for a, b in combinations(matrix.algorithms, 2)
    ]

    def one(job: tuple[str, str, str]) -> BootstrapNull:
        prob, a, b = job
        seed = ComparisonSeed(config.seed, prob, (a, b))
        return pooled_null(matrix[(a, prob)], matrix[(b, prob)], config.n_b, seed)

    n_threads = resolve_threads(threads)
    if n_threads == 1 or len(jobs) == 1:
        nulls = [one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            nulls = list(pool.map(one, jobs))
    return dict(zip(jobs, nulls))


def decide_comparisons(
    matrix: RunMatrix, config: RankingConfig, threads: int | None = None
) -> list[DecidedComparison]:
    """First pass: nulls, raw p-values, BH adjustment and decisions."""
    check_design(matrix)
    nulls = build_nulls(matrix, config, threads)

    raw: list[tuple[Key, float, float, BootstrapNull]] = []
    for prob in matrix.problems:
        for cand in matrix.algorithms:
            for opp in matrix.algorithms:
                if cand == opp:
                    continue
                if opp < cand:
                    null = nulls[(prob, opp, cand)]
                else:
                    null = nulls[(prob, cand, opp)].flipped()
                t_obs = observed_stat(matrix[(opp, prob)], matrix[(cand, prob)])
                raw.append(((prob, cand, opp), t_obs, p_value(null, t_obs), null))

    adjusted: dict[Key, float] = {}
    if config.bh_scope is BHScope.GLOBAL:
        families = {None: raw}
    else:
        families = defaultdict(list)
        for item in raw:
            families[item[0][0]].append(item)
    for members in families.values():
        family = PValueFamily(tuple((key, p) for key, _, p, _ in members), config.bh_scope)
        adjusted.update(bh_adjust(family))

    decided = []
    for (prob, cand, opp), t_obs, p_raw, null in raw:
        p_adj = adjusted[(prob, cand, opp)]
        decision = Decision.REJECT if p_adj <= config.alpha else Decision.NOT_REJECT
        decided.append(DecidedComparison(cand, opp, prob, t_obs, p_raw, p_adj, decision, null))
    return decided


def score_all(
    decided: Iterable[DecidedComparison], severity_s: float, delta_p: float
) -> list[PairwiseOutcome]:
    return [t.score(severity_s, delta_p) for t in decided]


def run_tournament(
    matrix: RunMatrix, config: RankingConfig, threads: int | None = None
) -> list[PairwiseOutcome]:
    """All k(k-1)m ordered comparisons, ordered by problem, candidate, opponent."""
    return score_all(decide_comparisons(matrix, config, threads), config.severity_s, config.delta_p)


@dataclass(frozen=True)
class LeagueRow:
    algorithm: str
    points_total: int
    gd_total: int
    rank: int
    points_mean: float
    points_sd: float


@dataclass(frozen=True)
class LeagueTable:
    rows: tuple[LeagueRow, ...]
    config_echo: RankingConfig | None = None

    def rank_of(self, algorithm: str) -> int:
        return self.row(algorithm).rank

    def row(self, algorithm: str) -> LeagueRow:
        for r in self.rows:
            if r.algorithm == algorithm:
                return r
        raise KeyError(algorithm)

    @property
    def order(self) -> list[str]:
        return [r.algorithm for r in self.rows]


@dataclass(frozen=True)
class ClassicalRow:
    algorithm: str
    points_total: int
    rank: int


@dataclass(frozen=True)
class ClassicalTable:
    rows: tuple[ClassicalRow, ...]

    def rank_of(self, algorithm: str) -> int:
        for r in self.rows:
            if r.algorithm == algorithm:
                return r.rank
        raise KeyError(algorithm)


def group_by_candidate(outcomes: Sequence[PairwiseOutcome]) -> dict[str, list[PairwiseOutcome]]:
    """Group outcomes by candidate after checking they form a full design."""
    if not outcomes:
        raise DataError("no outcomes")
    algorithms = sorted({o.candidate for o in outcomes} | {o.opponent for o in outcomes})
    problems = sorted({o.problem for o in outcomes})
    keys = [o.key for o in outcomes]
    if len(set(keys)) != len(keys):
        raise DataError("duplicate comparisons in outcome set")
    expected = {
        (p, c, o) for p in problems for c in algorithms for o in algorithms if c != o
    }
    missing = expected - set(keys)
    if missing:
        p, c, o = sorted(missing)[0]
        raise DataError(
            f"inconsistent design: {len(missing)} comparisons missing, e.g. {c} vs {o} on {p}"
        )
    grouped: dict[str, list[PairwiseOutcome]] = {a: [] for a in algorithms}
    for o in outcomes:
        grouped[o.candidate].append(o)
    return grouped


def _competition_ranks(sort_keys: list[tuple]) -> list[int]:
    """1-based ranks for pre-sorted keys; equal keys share the better rank."""
    ranks = []
    for i, k in enumerate(sort_keys):
        if i and k == sort_keys[i - 1]:
            ranks.append(ranks[-1])
        else:
            ranks.append(i + 1)
    return ranks


def build_table(
    outcomes: Sequence[PairwiseOutcome], config: RankingConfig | None = None
) -> LeagueTable:
    grouped = group_by_candidate(outcomes)
    stats = []
    for alg, items in grouped.items():
        pts = np.array([o.points for o in items], dtype=float)
        sd = float(pts.std(ddof=1)) if pts.size > 1 else 0.0
        stats.append((alg, int(pts.sum()), sum(o.gd for o in items), float(pts.mean()), sd))
    stats.sort(key=lambda s: (-s[1], -s[2], s[0]))
    ranks = _competition_ranks([(s[1], s[2]) for s in stats])
    rows = tuple(
        LeagueRow(alg, pts, gd, rank, mean, sd)
        for (alg, pts, gd, mean, sd), rank in zip(stats, ranks)
    )
    return LeagueTable(rows, config)


def classical_table(outcomes: Sequence[PairwiseOutcome]) -> ClassicalTable:
    """One point per rejection, nothing otherwise."""
    grouped = group_by_candidate(outcomes)
    totals = sorted(
        ((alg, sum(o.decision is Decision.REJECT for o in items)) for alg, items in grouped.items()),
        key=lambda t: (-t[1], t[0]),
    )
    ranks = _competition_ranks([(t[1],) for t in totals])
    return ClassicalTable(tuple(ClassicalRow(a, p, r) for (a, p), r in zip(totals, ranks)))


def per_function(outcomes: Sequence[PairwiseOutcome]) -> dict[tuple[str, str], tuple[int, int]]:
    """(algorithm, problem) -> (points, gd) summed over that algorithm's candidate side."""
    grouped = group_by_candidate(outcomes)
    out: dict[tuple[str, str], tuple[int, int]] = {}
    for alg in sorted(grouped):
        for o in grouped[alg]:
            pts, gd = out.get((alg, o.problem), (0, 0))
            out[(alg, o.problem)] = (pts + o.points, gd + o.gd)
    return dict(sorted(out.items()))
