"""Post-decision severity and the supported discrepancy.

Severity is read off the bootstrap null shifted to mean ``delta``:

* after a rejection, ``S_r(delta) = #(t* <= t_obs - delta) / n_b``, which
  falls from 1 to 0 as delta grows;
* after a non-rejection, ``S_nr(delta) = #(t* > t_obs - delta) / n_b``, which
  rises from 0 to 1.

The shifted statistic is compared as ``t* <= t_obs - delta`` (equivalently
``t* + delta <= t_obs``). Reading the shift the other way round would make
``S_r`` increase with delta, and losses would never get a negative supported
discrepancy.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.stats import norm

from leaguerank.errors import ConfigError
from leaguerank.resampling import BootstrapNull, quantile


class Decision(str, Enum):
    REJECT = "reject"
    NOT_REJECT = "not_reject"


def severity_reject(null: BootstrapNull, t_obs: float, delta: float) -> float:
    return null.count_le(t_obs - delta) / null.n_b


def severity_nonreject(null: BootstrapNull, t_obs: float, delta: float) -> float:
    return (null.n_b - null.count_le(t_obs - delta)) / null.n_b


def severity(null: BootstrapNull, t_obs: float, delta: float, decision: Decision) -> float:
    if Decision(decision) is Decision.REJECT:
        return severity_reject(null, t_obs, delta)
    return severity_nonreject(null, t_obs, delta)


def _check_level(s: float) -> None:
    if not (0.5 <= s < 1.0):
        raise ConfigError(f"severity level must be in [0.5, 1), got {s}")


def supported_delta(null: BootstrapNull, t_obs: float, s: float, decision: Decision) -> float:
    """Discrepancy at which the decision's severity crosses ``s``.

    Reject: the largest delta with ``S_r(delta) >= s``, which is
    ``t_obs - quantile(null, s)``. Not reject: the largest delta with
    ``S_nr(delta) <= s``, which is ``t_obs - quantile(null, 1 - s)``; any larger
    delta has ``S_nr > s``.

    The result is snapped to the largest float for which the count condition
    holds when ``t_obs - delta`` is evaluated in floating point.
    """
    _check_level(s)
    level = s if Decision(decision) is Decision.REJECT else _complement(s)
    return _largest_delta_at_or_below(t_obs, quantile(null, level))


def _largest_delta_at_or_below(t_obs: float, threshold: float) -> float:
    """Largest float delta with ``t_obs - delta >= threshold`` in float arithmetic.

    ``fl(t_obs - delta)`` is monotone in delta but may stay constant over very
    many consecutive floats, so the search runs over the ordered bit patterns
    (exponential bracketing, then bisection) rather than stepping one ulp.
    """
    t_obs, threshold = float(t_obs), float(threshold)

    def holds(k: int) -> bool:
        return t_obs - _from_key(k) >= threshold

    k0 = _to_key(t_obs - threshold)
    step = 1
    if holds(k0):
        lo, hi = k0, k0 + 1
        while hi < _MAX_KEY and holds(hi):
            lo, hi = hi, min(k0 + step, _MAX_KEY)
            step *= 2
        if holds(hi):
            return _from_key(hi)
    else:
        lo, hi = k0 - 1, k0
        while not holds(lo):
            hi, lo = lo, max(k0 - step, -_MAX_KEY)
            step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return _from_key(lo)


# floats as integers whose order matches the float order (-0.0 and 0.0 share 0)
_MAX_KEY = int(np.float64(np.finfo(np.float64).max).view(np.int64))


def _to_key(x: float) -> int:
    bits = int(np.float64(x).view(np.int64))
    return bits if bits >= 0 else -(bits & 0x7FFFFFFFFFFFFFFF)


def _from_key(k: int) -> float:
    if k >= 0:
        return float(np.int64(k).view(np.float64))
    return -float(np.int64(-k).view(np.float64))


def _complement(s: float) -> float:
    # 1 - 0.8 is 0.19999999999999996 in binary; go through the decimal form
    # so that quantile() sees 0.2.
    return float(1 - Fraction(repr(float(s))))


@dataclass(frozen=True, eq=False)
class SeverityCurve:
    deltas: np.ndarray
    values: np.ndarray
    decision: Decision

    def rows(self) -> list[tuple[float, float, str]]:
        return [(float(d), float(v), self.decision.value) for d, v in zip(self.deltas, self.values)]


def severity_curve(
    null: BootstrapNull,
    t_obs: float,
    decision: Decision,
    delta_grid: Sequence[float] | np.ndarray,
) -> SeverityCurve:
    grid = np.asarray(delta_grid, dtype=float).ravel()
    if grid.size == 0:
        raise ConfigError("delta grid is empty")
    if np.any(np.diff(grid) < 0):
        raise ConfigError("delta grid must be ascending")
    decision = Decision(decision)
    counts = np.searchsorted(null.replicates, t_obs - grid, side="right")
    if decision is Decision.NOT_REJECT:
        counts = null.n_b - counts
    values = counts / null.n_b
    grid.setflags(write=False)
    values.setflags(write=False)
    return SeverityCurve(grid, values, decision)


def default_delta_grid(null: BootstrapNull, t_obs: float, points: int = 101) -> np.ndarray:
    """``points`` deltas over [t_obs - range, t_obs + range] of the null."""
    if points < 1:
        raise ConfigError("grid needs at least one point")
    spread = float(null.replicates[-1] - null.replicates[0])
    if spread == 0.0:
        spread = 1.0
    if points == 1:
        return np.array([t_obs])
    return np.linspace(t_obs - spread, t_obs + spread, points)


class NormalSeverity(NamedTuple):
    decision: Decision
    severity: float
    supported_delta: float


def normal_theory_severity(
    mean_diff: float, std_err: float, alpha: float, s: float, delta: float
) -> NormalSeverity:
    """Gaussian reference for the upper-tail z-test and its severity.

    Decides with ``d = mean_diff / std_err`` against ``u_{1-alpha}``. Severity
    at ``delta`` is ``Phi(d - delta/std_err)`` after a rejection and its
    complement otherwise; ``supported_delta`` is where that crosses ``s``.
    Meant as an oracle for the bootstrap path on normal data.
    """
    if not std_err > 0:
        raise ConfigError(f"std_err must be positive, got {std_err}")
    d = mean_diff / std_err
    z = d - delta / std_err
    if d > norm.ppf(1.0 - alpha):
        return NormalSeverity(Decision.REJECT, float(norm.cdf(z)), mean_diff - std_err * norm.ppf(s))
    return NormalSeverity(
        Decision.NOT_REJECT, float(norm.sf(z)), mean_diff - std_err * norm.ppf(1.0 - s)
    )


def normal_theory_p(mean_diff: float, std_err: float) -> float:
    """Upper-tail p-value of the z statistic."""
    if not std_err > 0:
        raise ConfigError(f"std_err must be positive, got {std_err}")
    return float(norm.sf(mean_diff / std_err))


__all__ = [
    "Decision",
    "NormalSeverity",
    "SeverityCurve",
    "default_delta_grid",
    "normal_theory_p",
    "normal_theory_severity",
    "severity",
    "severity_curve",
    "severity_nonreject",
    "severity_reject",
    "supported_delta",
]
