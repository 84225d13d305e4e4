"""Writing league tables, breakdowns, severity curves and run metadata to disk.

Everything written here is a pure function of the bundle, so two emissions of
the same bundle are byte-identical. Floats are written with ``repr`` and
re-read exactly.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from leaguerank.config import BHScope, RankingConfig
from leaguerank.data import RunMatrix
from leaguerank.errors import ConfigError
from leaguerank.league import (
    ClassicalTable,
    LeagueRow,
    LeagueTable,
    PairwiseOutcome,
    build_table,
    classical_table,
    group_by_candidate,
    per_function,
)
from leaguerank.severity import SeverityCurve

FORMATS = frozenset({"csv", "markdown"})
LEAGUE_HEADER = ("algorithm", "points", "gd", "rank", "points_mean", "points_sd")
CLASSICAL_HEADER = ("algorithm", "points", "rank", "proposed_rank", "change")
DISTRIBUTION_HEADER = ("algorithm", "min", "q1", "median", "q3", "max", "mean", "sd", "n")
CURVE_HEADER = ("delta", "severity", "decision")


def _num(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class CurveExport:
    problem: str
    candidate: str
    opponent: str
    t_obs: float
    delta_star: float
    severity_s: float
    curve: SeverityCurve

    @property
    def filename(self) -> str:
        return f"{_safe(self.problem)}__{_safe(self.candidate)}__vs__{_safe(self.opponent)}.csv"


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


@dataclass(frozen=True)
class ReportBundle:
    league: LeagueTable
    classical: ClassicalTable
    per_function: dict[tuple[str, str], tuple[int, int]]
    distribution: dict[str, dict[str, float]]
    metadata: dict[str, Any]
    curves: tuple[CurveExport, ...] = field(default=())


def points_distribution(outcomes: Sequence[PairwiseOutcome]) -> dict[str, dict[str, float]]:
    """Five-number summary (plus mean, SD, count) of each algorithm's per-comparison points."""
    out = {}
    for alg, items in sorted(group_by_candidate(outcomes).items()):
        pts = np.array([o.points for o in items], dtype=float)
        q = np.percentile(pts, [0, 25, 50, 75, 100])
        out[alg] = {
            "min": float(q[0]),
            "q1": float(q[1]),
            "median": float(q[2]),
            "q3": float(q[3]),
            "max": float(q[4]),
            "mean": float(pts.mean()),
            "sd": float(pts.std(ddof=1)) if pts.size > 1 else 0.0,
            "n": int(pts.size),
        }
    return out


def run_metadata(config: RankingConfig, matrix: RunMatrix | None = None, **extra: Any) -> dict[str, Any]:
    from leaguerank import __version__

    meta: dict[str, Any] = {"tool": "leaguerank", "version": __version__}
    meta.update(config.as_dict())
    meta["bh_scopes_available"] = [scope.value for scope in BHScope]
    if matrix is not None:
        meta["input_digest"] = "sha256:" + matrix.digest()
        meta["algorithms"] = list(matrix.algorithms)
        meta["problems"] = list(matrix.problems)
    meta.update(extra)
    return meta


def build_bundle(
    outcomes: Sequence[PairwiseOutcome],
    config: RankingConfig,
    matrix: RunMatrix | None = None,
    curves: Iterable[CurveExport] = (),
    **extra_meta: Any,
) -> ReportBundle:
    return ReportBundle(
        league=build_table(outcomes, config),
        classical=classical_table(outcomes),
        per_function=per_function(outcomes),
        distribution=points_distribution(outcomes),
        metadata=run_metadata(config, matrix, comparisons=len(outcomes), **extra_meta),
        curves=tuple(curves),
    )


# --- row builders, shared by files and stdout -------------------------------


def league_rows(table: LeagueTable) -> list[tuple[str, ...]]:
    return [
        (r.algorithm, str(r.points_total), str(r.gd_total), str(r.rank), _num(r.points_mean), _num(r.points_sd))
        for r in table.rows
    ]


def rank_change(league: LeagueTable, classical: ClassicalTable, algorithm: str) -> int:
    """Proposed rank minus classical rank; positive means the classical ranking puts it higher."""
    return league.rank_of(algorithm) - classical.rank_of(algorithm)


def _arrow(change: int) -> str:
    if change > 0:
        return f"↑ {change}"
    if change < 0:
        return f"↓ {-change}"
    return "-"


def classical_rows(league: LeagueTable, classical: ClassicalTable) -> list[tuple[str, ...]]:
    return [
        (r.algorithm, str(r.points_total), str(r.rank), str(league.rank_of(r.algorithm)),
         str(rank_change(league, classical, r.algorithm)))
        for r in classical.rows
    ]


def format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Plain aligned text table for terminals."""
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines)


def markdown_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


# --- writers ----------------------------------------------------------------


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def _write_text(path: Path, text: str) -> Path:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def curve_csv(export: CurveExport) -> str:
    """Curve CSV text; decision and supported delta go in ``#`` comment lines."""
    buf = io.StringIO()
    buf.write(f"# problem={export.problem} candidate={export.candidate} opponent={export.opponent}\n")
    buf.write(
        f"# decision={export.curve.decision.value} t_obs={_num(export.t_obs)} "
        f"severity={_num(export.severity_s)} delta_star={_num(export.delta_star)}\n"
    )
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    w.writerows((_num(d), _num(v), dec) for d, v, dec in export.curve.rows())
    return buf.getvalue()


def write_curve(path: str | Path, export: CurveExport) -> Path:
    return _write_text(Path(path), curve_csv(export))


def write_metadata(path: str | Path, metadata: dict[str, Any]) -> Path:
    return _write_text(Path(path), json.dumps(metadata, indent=2, sort_keys=True) + "\n")


def emit(bundle: ReportBundle, out_dir: str | Path, formats: Iterable[str] = FORMATS) -> list[Path]:
    """Write the bundle's files into ``out_dir`` and return their paths."""
    formats = set(formats)
    unknown = formats - FORMATS
    if unknown:
        raise ConfigError(f"unknown report format(s): {', '.join(sorted(unknown))}")
    if not formats:
        raise ConfigError("no report format selected")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    league_r = league_rows(bundle.league)
    classical_r = classical_rows(bundle.league, bundle.classical)
    if "csv" in formats:
        written.append(_write_csv(out / "league.csv", LEAGUE_HEADER, league_r))
        written.append(_write_csv(out / "classical.csv", CLASSICAL_HEADER, classical_r))
        written.append(
            _write_csv(
                out / "per_function.csv",
                ("algorithm", "problem", "points", "gd"),
                [(a, p, pts, gd) for (a, p), (pts, gd) in bundle.per_function.items()],
            )
        )
        written.append(
            _write_csv(
                out / "points_distribution.csv",
                DISTRIBUTION_HEADER,
                [
                    (alg, *(_num(s[k]) for k in DISTRIBUTION_HEADER[1:-1]), s["n"])
                    for alg, s in bundle.distribution.items()
                ],
            )
        )
    if "markdown" in formats:
        classical_pts = {r.algorithm: r.points_total for r in bundle.classical.rows}
        rows = [
            (r.algorithm, str(r.points_total), str(r.gd_total), str(classical_pts[r.algorithm]),
             _arrow(rank_change(bundle.league, bundle.classical, r.algorithm)))
            for r in bundle.league.rows
        ]
        written.append(
            _write_text(
                out / "league.md",
                markdown_table(("Algorithm", "points", "Goal Difference", "classical points", "Change"), rows),
            )
        )
        rows = [
            (r.algorithm, str(r.points_total), str(r.rank),
             _arrow(rank_change(bundle.league, bundle.classical, r.algorithm)))
            for r in bundle.classical.rows
        ]
        written.append(
            _write_text(out / "classical.md", markdown_table(("Algorithm", "points", "rank", "Change"), rows))
        )

    if bundle.curves:
        curve_dir = out / "severity_curves"
        curve_dir.mkdir(exist_ok=True)
        for c in bundle.curves:
            written.append(write_curve(curve_dir / c.filename, c))
    written.append(write_metadata(out / "metadata.json", bundle.metadata))
    return written


def read_league_csv(path: str | Path) -> list[LeagueRow]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            LeagueRow(
                row["algorithm"],
                int(row["points"]),
                int(row["gd"]),
                int(row["rank"]),
                float(row["points_mean"]),
                float(row["points_sd"]),
            )
            for row in reader
        ]


def write_sensitivity(grid, out_dir: str | Path, metadata: dict[str, Any]) -> list[Path]:
    """Summary CSV plus one league CSV per grid cell."""
    out = Path(out_dir)
    cells = out / "sensitivity_tables"
    cells.mkdir(parents=True, exist_ok=True)
    written = [
        _write_csv(
            out / "sensitivity.csv",
            ("s", "delta_p", "algorithm", "points", "gd", "rank", "rank_change_vs_base"),
            [(_num(s), _num(dp), a, p, g, r, c) for s, dp, a, p, g, r, c in grid.rows()],
        )
    ]
    for s in grid.s_values:
        for dp in grid.delta_p_values:
            name = f"league_s{s:g}_dp{dp:g}.csv"
            written.append(_write_csv(cells / name, LEAGUE_HEADER, league_rows(grid.tables[(s, dp)])))
    written.append(write_metadata(out / "metadata.json", metadata))
    return written
