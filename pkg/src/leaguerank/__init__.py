"""Severity-based league ranking of stochastic optimization algorithms.

Algorithms play every other algorithm on every problem. Each ordered match is
decided by a pooled-bootstrap test of the mean-difference statistic, the
p-values are Benjamini-Hochberg adjusted, and the winner's margin is measured
by the discrepancy supported at a chosen severity. Wins that clear a
practical-relevance threshold earn 3 points, significant but small wins earn
1, and the supported discrepancy in units of that threshold becomes the goal
difference.
"""

from __future__ import annotations

from leaguerank.config import BHScope, RankingConfig
from leaguerank.data import Diagnostic, RunMatrix, load_runs, validate, write_runs
from leaguerank.errors import ConfigError, DataError, LeagueRankError
from leaguerank.league import (
    ClassicalTable,
    Decision,
    LeagueTable,
    PairwiseOutcome,
    build_table,
    classical_table,
    run_tournament,
    score_comparison,
)
from leaguerank.multiplicity import PValueFamily, bh_adjust
from leaguerank.resampling import (
    BootstrapNull,
    ComparisonSeed,
    observed_stat,
    p_value,
    pooled_null,
    quantile,
)
from leaguerank.sensitivity import SensitivityGrid, sweep
from leaguerank.severity import (
    SeverityCurve,
    normal_theory_severity,
    severity_curve,
    severity_nonreject,
    severity_reject,
    supported_delta,
)

__version__ = "0.1.0"

__all__ = [
    "BHScope",
    "BootstrapNull",
    "ClassicalTable",
    "ComparisonSeed",
    "ConfigError",
    "DataError",
    "Decision",
    "Diagnostic",
    "LeagueRankError",
    "LeagueTable",
    "PValueFamily",
    "PairwiseOutcome",
    "RankingConfig",
    "RunMatrix",
    "SensitivityGrid",
    "SeverityCurve",
    "bh_adjust",
    "build_table",
    "classical_table",
    "load_runs",
    "normal_theory_severity",
    "observed_stat",
    "p_value",
    "pooled_null",
    "quantile",
    "run_tournament",
    "score_comparison",
    "severity_curve",
    "severity_nonreject",
    "severity_reject",
    "supported_delta",
    "sweep",
    "validate",
    "write_runs",
]
