"""Ranking configuration."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

from leaguerank.errors import ConfigError

# Case-study defaults: alpha 0.05, severity 0.8, 10000 resamples.
DEFAULT_ALPHA = 0.05
DEFAULT_SEVERITY = 0.8
DEFAULT_RESAMPLES = 10_000
DEFAULT_SEED = 0
MIN_RESAMPLES = 100


class BHScope(str, Enum):
    """Which p-values form one Benjamini-Hochberg family."""

    GLOBAL = "global"
    PER_PROBLEM = "per-problem"


@dataclass(frozen=True)
class RankingConfig:
    """User-chosen parameters of one ranking run.

    ``delta_p`` has no default: the practically relevant improvement is in the
    units of the run metric and only the user can pick it.
    """

    delta_p: float
    alpha: float = DEFAULT_ALPHA
    severity_s: float = DEFAULT_SEVERITY
    n_b: int = DEFAULT_RESAMPLES
    seed: int = DEFAULT_SEED
    bh_scope: BHScope = BHScope.GLOBAL
    budget: float | None = None
    cap_missing_to_budget: bool = True

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 0.5):
            raise ConfigError(f"alpha must be in (0, 0.5], got {self.alpha}")
        if not (0.5 <= self.severity_s < 1.0):
            raise ConfigError(f"severity must be in [0.5, 1), got {self.severity_s}")
        if not (math.isfinite(self.delta_p) and self.delta_p > 0):
            raise ConfigError(f"delta_p must be a positive real, got {self.delta_p}")
        if int(self.n_b) != self.n_b or self.n_b < MIN_RESAMPLES:
            raise ConfigError(f"n_b must be an integer >= {MIN_RESAMPLES}, got {self.n_b}")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.budget is not None and not (math.isfinite(self.budget) and self.budget > 0):
            raise ConfigError(f"budget must be a positive real, got {self.budget}")
        try:
            object.__setattr__(self, "bh_scope", BHScope(self.bh_scope))
        except ValueError:
            raise ConfigError(f"unknown BH scope {self.bh_scope!r}") from None
        object.__setattr__(self, "n_b", int(self.n_b))
        object.__setattr__(self, "seed", int(self.seed))

    def replace(self, **changes: Any) -> RankingConfig:
        values = asdict(self)
        values.update(changes)
        return RankingConfig(**values)

    def as_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["bh_scope"] = self.bh_scope.value
        return d
