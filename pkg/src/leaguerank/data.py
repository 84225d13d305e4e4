"""Run data: the RunMatrix type, CSV ingestion, validation and budget capping.

Input is long-format CSV with the exact header ``algorithm,problem,run,value``.
One cell holds the per-run values of one algorithm on one problem, ordered by
run index.
"""

from __future__ import annotations

import csv
import hashlib
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

import numpy as np

from leaguerank.config import RankingConfig
from leaguerank.errors import DataError

HEADER = ("algorithm", "problem", "run", "value")
MIN_RECOMMENDED_RUNS = 10

Cell = tuple[str, str]


def _frozen(values: Iterable[float]) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RunMatrix:
    """Per (algorithm, problem) sequences of run values, immutable once built."""

    entries: Mapping[Cell, np.ndarray]
    budget: float | None = None
    _algorithms: tuple[str, ...] = field(init=False, repr=False)
    _problems: tuple[str, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        cells = {(str(a), str(p)): _frozen(v) for (a, p), v in self.entries.items()}
        for key, values in cells.items():
            if values.ndim != 1:
                raise DataError(f"cell {key} must be one-dimensional")
            if values.size and not np.all(np.isfinite(values)):
                raise DataError(f"cell {key} contains non-finite values")
            if values.size and values.min() < 0:
                raise DataError(f"cell {key} contains negative values")
            if self.budget is not None and values.size and values.max() > self.budget:
                raise DataError(f"cell {key} has values above the budget {self.budget:g}")
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(cells.items()))))
        object.__setattr__(self, "_algorithms", tuple(sorted({a for a, _ in cells})))
        object.__setattr__(self, "_problems", tuple(sorted({p for _, p in cells})))

    @property
    def algorithms(self) -> tuple[str, ...]:
        return self._algorithms

    @property
    def problems(self) -> tuple[str, ...]:
        return self._problems

    def __getitem__(self, key: Cell) -> np.ndarray:
        return self.entries[key]

    def __contains__(self, key: object) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunMatrix):
            return NotImplemented
        return (
            self.budget == other.budget
            and self.entries.keys() == other.entries.keys()
            and all(np.array_equal(v, other.entries[k]) for k, v in self.entries.items())
        )

    __hash__ = None  # type: ignore[assignment]

    def missing_cells(self) -> list[Cell]:
        """Cells of the full algorithm x problem design that are absent."""
        return [
            (a, p)
            for a in self.algorithms
            for p in self.problems
            if (a, p) not in self.entries
        ]

    def canonical_rows(self) -> list[tuple[str, str, int, str]]:
        rows = []
        for (alg, prob), values in self.entries.items():
            for i, v in enumerate(values, start=1):
                rows.append((alg, prob, i, format_value(float(v))))
        return rows

    def digest(self) -> str:
        """SHA-256 over the canonical CSV serialization."""
        h = hashlib.sha256()
        h.update((",".join(HEADER) + "\n").encode())
        for row in self.canonical_rows():
            h.update((",".join(map(str, row)) + "\n").encode())
        return h.hexdigest()


def format_value(v: float) -> str:
    # integral values print without a trailing .0; everything else via repr,
    # which round-trips exactly through float()
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def write_runs(matrix: RunMatrix, path: str | Path) -> Path:
    """Write the canonical CSV: sorted by algorithm then problem, runs renumbered from 1."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(matrix.canonical_rows())
    return path


def load_runs(path: str | Path, config: RankingConfig | None = None) -> RunMatrix:
    """Read a long-format run CSV into a RunMatrix.

    With ``config.budget`` set and ``config.cap_missing_to_budget`` true, values
    above the budget and empty values are replaced by the budget. Empty values
    are otherwise an error.
    """
    budget = config.budget if config is not None else None
    capping = budget is not None and (config is not None and config.cap_missing_to_budget)

    raw: dict[Cell, dict[int, float]] = {}
    with Path(path).open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty file", line=1) from None
        except csv.Error as exc:
            raise DataError(f"CSV parse error: {exc}", line=1) from None
        if tuple(h.strip() for h in header) != HEADER:
            raise DataError(f"header must be exactly {','.join(HEADER)!r}", line=1)
        try:
            for row in reader:
                line = reader.line_num
                if not row or all(not c.strip() for c in row):
                    continue
                alg, prob, run, value = _parse_row(row, line, budget, capping)
                runs = raw.setdefault((alg, prob), {})
                if run in runs:
                    raise DataError(f"duplicate run {run} for algorithm {alg!r} on problem {prob!r}", line=line)
                runs[run] = value
        except csv.Error as exc:
            raise DataError(f"CSV parse error: {exc}", line=reader.line_num) from None

    if not raw:
        raise DataError("no data rows")
    matrix = RunMatrix(
        {key: [runs[r] for r in sorted(runs)] for key, runs in raw.items()},
        budget=budget,
    )
    missing = matrix.missing_cells()
    if missing:
        listed = ", ".join(f"{a}/{p}" for a, p in missing)
        raise DataError(f"incomplete design, missing algorithm/problem cells: {listed}")
    return matrix


def _parse_row(
    row: list[str], line: int, budget: float | None, capping: bool
) -> tuple[str, str, int, float]:
    if len(row) != 4:
        raise DataError(f"expected 4 fields, got {len(row)}", line=line)
    alg, prob, run_s, value_s = (c.strip() for c in row)
    if not alg or not prob:
        raise DataError("algorithm and problem must be non-empty", line=line)
    try:
        run = int(run_s)
    except ValueError:
        raise DataError(f"run index {run_s!r} is not an integer", line=line) from None
    if run < 1:
        raise DataError(f"run index must be positive, got {run}", line=line)

    if value_s == "":
        if capping:
            return alg, prob, run, float(budget)  # type: ignore[arg-type]
        raise DataError("empty value (set a budget with capping to treat it as a failed run)", line=line)
    try:
        value = float(value_s)
    except ValueError:
        raise DataError(f"value {value_s!r} is not numeric", line=line) from None
    if not math.isfinite(value):
        raise DataError(f"value {value_s!r} is not finite", line=line)
    if value < 0:
        raise DataError(f"value {value_s!r} is negative", line=line)
    if budget is not None and value > budget:
        if not capping:
            raise DataError(f"value {value_s} exceeds budget {budget:g} and capping is off", line=line)
        value = float(budget)
    return alg, prob, run, value


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "warning" or "error"
    code: str
    message: str
    cells: tuple[Cell, ...] = ()


def validate(matrix: RunMatrix) -> list[Diagnostic]:
    """Report design problems without touching the data."""
    out: list[Diagnostic] = []
    for a, p in matrix.missing_cells():
        out.append(Diagnostic("error", "missing-cell", f"no runs for {a} on {p}", ((a, p),)))
    for key, values in matrix.entries.items():
        a, p = key
        if values.size == 0:
            out.append(Diagnostic("error", "empty-cell", f"cell {a}/{p} is empty", (key,)))
            continue
        if values.size > 1 and np.all(values == values[0]):
            out.append(Diagnostic("warning", "zero-variance", f"cell {a}/{p} has zero variance", (key,)))
        if values.size < MIN_RECOMMENDED_RUNS:
            out.append(
                Diagnostic(
                    "warning",
                    "few-runs",
                    f"cell {a}/{p} has {values.size} runs (< {MIN_RECOMMENDED_RUNS})",
                    (key,),
                )
            )
    for p in matrix.problems:
        cells = tuple((a, p) for a in matrix.algorithms if (a, p) in matrix.entries)
        counts = {matrix[c].size for c in cells}
        if len(counts) > 1:
            detail = ", ".join(f"{a}={matrix[(a, p)].size}" for a, _ in cells)
            out.append(
                Diagnostic("warning", "unequal-runs", f"unequal run counts on {p}: {detail}", cells)
            )
    return out


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.level == "error" for d in diagnostics)
