"""Re-scoring one tournament over grids of severity level and delta_p.

Nulls and decisions are computed once. Only the supported discrepancy, points
and goal difference change from cell to cell, so monotonicity in either
parameter holds exactly.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from leaguerank.config import RankingConfig
from leaguerank.data import RunMatrix
from leaguerank.errors import ConfigError
from leaguerank.league import LeagueTable, PairwiseOutcome, build_table, decide_comparisons, score_all

DEFAULT_SEVERITIES = (0.5, 0.65, 0.8, 0.95)
DEFAULT_DELTA_PS = (50.0, 100.0, 250.0, 500.0)

GridCell = tuple[float, float]


@dataclass(frozen=True)
class SensitivityGrid:
    s_values: tuple[float, ...]
    delta_p_values: tuple[float, ...]
    tables: dict[GridCell, LeagueTable]
    outcomes: dict[GridCell, list[PairwiseOutcome]]
    base: GridCell
    input_sorted: bool = True

    def rank_change(self, cell: GridCell, algorithm: str) -> int:
        """Positions gained relative to the base cell (positive means moved up)."""
        return self.tables[self.base].rank_of(algorithm) - self.tables[cell].rank_of(algorithm)

    def rows(self) -> list[tuple[float, float, str, int, int, int, int]]:
        """(s, delta_p, algorithm, points, gd, rank, rank_change_vs_base)."""
        out = []
        for s in self.s_values:
            for dp in self.delta_p_values:
                for r in self.tables[(s, dp)].rows:
                    out.append(
                        (s, dp, r.algorithm, r.points_total, r.gd_total, r.rank,
                         self.rank_change((s, dp), r.algorithm))
                    )
        return out


def _grid(values: Iterable[float], name: str) -> tuple[tuple[float, ...], bool]:
    vals = [float(v) for v in values]
    if not vals:
        raise ConfigError(f"{name} grid is empty")
    ordered = sorted(set(vals))
    return tuple(ordered), ordered == vals


def sweep(
    matrix: RunMatrix,
    config: RankingConfig,
    s_values: Iterable[float] = DEFAULT_SEVERITIES,
    delta_p_values: Iterable[float] = DEFAULT_DELTA_PS,
    threads: int | None = None,
) -> SensitivityGrid:
    """League tables for every (s, delta_p) pair, sharing one set of decisions.

    The base cell for rank changes is ``(config.severity_s, config.delta_p)``
    when it lies on the grid, otherwise the first cell.
    """
    s_grid, s_sorted = _grid(s_values, "severity")
    dp_grid, dp_sorted = _grid(delta_p_values, "delta_p")
    for s in s_grid:
        config.replace(severity_s=s)
    for dp in dp_grid:
        config.replace(delta_p=dp)

    decided = decide_comparisons(matrix, config, threads)
    tables: dict[GridCell, LeagueTable] = {}
    outcomes: dict[GridCell, list[PairwiseOutcome]] = {}
    for s in s_grid:
        for dp in dp_grid:
            cell_cfg = config.replace(severity_s=s, delta_p=dp)
            outs = score_all(decided, s, dp)
            outcomes[(s, dp)] = outs
            tables[(s, dp)] = build_table(outs, cell_cfg)
    base = (config.severity_s, config.delta_p)
    if base not in tables:
        base = (s_grid[0], dp_grid[0])
    return SensitivityGrid(s_grid, dp_grid, tables, outcomes, base, s_sorted and dp_sorted)
