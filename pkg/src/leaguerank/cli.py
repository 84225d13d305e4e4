"""Command-line front end.

Exit status: 0 success, 1 configuration error, 2 data error, 3 I/O error.
Failures print one line to stderr of the form ``leaguerank: error[KIND]: reason``.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from leaguerank import __version__
from leaguerank.benchgen import HeuristicKind, HeuristicSpec, ProblemSpec, generate_matrix
from leaguerank.config import (
    DEFAULT_ALPHA,
    DEFAULT_RESAMPLES,
    DEFAULT_SEED,
    DEFAULT_SEVERITY,
    BHScope,
    RankingConfig,
)
from leaguerank.data import load_runs, validate, write_runs
from leaguerank.errors import ConfigError, DataError
from leaguerank.league import THREADS_ENV, decide_comparisons, resolve_threads, score_all
from leaguerank.report import (
    FORMATS,
    LEAGUE_HEADER,
    CurveExport,
    build_bundle,
    curve_csv,
    emit,
    format_table,
    league_rows,
    run_metadata,
    write_curve,
    write_sensitivity,
)
from leaguerank.sensitivity import DEFAULT_DELTA_PS, DEFAULT_SEVERITIES, sweep
from leaguerank.severity import default_delta_grid, severity_curve, supported_delta

EXIT_CONFIG, EXIT_DATA, EXIT_IO = 1, 2, 3

EPILOG = """exit status: 0 ok, 1 configuration error, 2 data error, 3 I/O error.
--threads defaults to $%s or the number of CPUs; results do not depend on it.""" % THREADS_ENV


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors (exit 1), not argparse's exit 2
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _add_ranking_args(p: argparse.ArgumentParser, delta_p_required: bool) -> None:
    p.add_argument("--input", required=True, type=Path, help="run CSV with header algorithm,problem,run,value")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="significance level (default %(default)s)")
    p.add_argument("--severity", type=float, default=DEFAULT_SEVERITY, help="desired severity S (default %(default)s)")
    p.add_argument(
        "--delta-p",
        type=float,
        required=delta_p_required,
        help="practically relevant improvement, in run-value units (no default)",
    )
    p.add_argument("--resamples", type=int, default=DEFAULT_RESAMPLES, help="bootstrap resamples n_b (default %(default)s)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default %(default)s)")
    p.add_argument("--bh-scope", choices=[s.value for s in BHScope], default=BHScope.GLOBAL.value)
    p.add_argument("--budget", type=float, default=None, help="cap run values at this budget")
    p.add_argument("--no-cap", action="store_true", help="reject values above --budget instead of capping")
    p.add_argument("--threads", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="leaguerank",
        description="Severity-based league ranking of stochastic optimization algorithms.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rank", help="run the tournament and write league tables", epilog=EPILOG)
    _add_ranking_args(p, delta_p_required=True)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--formats", type=_name_list, default=["csv", "markdown"], help="comma list of csv,markdown")
    p.add_argument(
        "--curve",
        action="append",
        default=[],
        metavar="PROBLEM:CANDIDATE:OPPONENT",
        help="also export the severity curve of this comparison (repeatable)",
    )
    p.add_argument("--grid-points", type=int, default=101)

    p = sub.add_parser("sensitivity", help="re-score over grids of S and delta_p", epilog=EPILOG)
    _add_ranking_args(p, delta_p_required=False)
    p.add_argument(
        "--severity-list", type=_float_list, default=list(DEFAULT_SEVERITIES), help="comma list (default %(default)s)"
    )
    p.add_argument(
        "--delta-p-list", type=_float_list, default=list(DEFAULT_DELTA_PS), help="comma list (default %(default)s)"
    )
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("generate", help="simulate toy fixed-target run data", epilog=EPILOG)
    p.add_argument("--problem", type=_name_list, default=["onemax"], help="comma list of onemax,leadingones")
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--target", type=int, default=None, help="fitness to hit (default: dimension)")
    p.add_argument(
        "--algorithms",
        type=_name_list,
        default=[h.value for h in HeuristicKind],
        help="comma list of rls,one_plus_one_ea,random_search",
    )
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--budget", type=int, default=50_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", type=Path, required=True, help="output CSV file")

    p = sub.add_parser("curves", help="export the severity curve of one comparison", epilog=EPILOG)
    _add_ranking_args(p, delta_p_required=False)
    p.add_argument("--pair", type=_name_list, required=True, metavar="CANDIDATE,OPPONENT")
    p.add_argument("--problem", required=True)
    p.add_argument("--grid-points", type=int, default=101)
    p.add_argument("--out", type=Path, default=None, help="output CSV file (default: stdout)")

    sub.add_parser("version", help="print the version")
    return parser


def _config(args: argparse.Namespace, delta_p: float | None = None) -> RankingConfig:
    return RankingConfig(
        delta_p=args.delta_p if delta_p is None else delta_p,
        alpha=args.alpha,
        severity_s=args.severity,
        n_b=args.resamples,
        seed=args.seed,
        bh_scope=args.bh_scope,
        budget=args.budget,
        cap_missing_to_budget=not args.no_cap,
    )


def _load(args: argparse.Namespace, config: RankingConfig):
    matrix = load_runs(args.input, config)
    for d in validate(matrix):
        if d.level == "warning":
            print(f"leaguerank: warning[{d.code}]: {d.message}", file=sys.stderr)
    return matrix


def _curve_export(decided, problem, candidate, opponent, s, grid_points) -> CurveExport:
    for c in decided:
        if (c.problem, c.candidate, c.opponent) == (problem, candidate, opponent):
            delta_star = supported_delta(c.null, c.t_obs, s, c.decision)
            grid = default_delta_grid(c.null, c.t_obs, grid_points)
            curve = severity_curve(c.null, c.t_obs, c.decision, grid)
            return CurveExport(problem, candidate, opponent, c.t_obs, delta_star, s, curve)
    raise DataError(f"no comparison {candidate} vs {opponent} on problem {problem!r}")


def cmd_rank(args: argparse.Namespace) -> int:
    config = _config(args)
    threads = resolve_threads(args.threads)
    unknown = set(args.formats) - FORMATS
    if unknown or not args.formats:
        raise ConfigError(f"--formats must be a non-empty subset of csv,markdown, got {','.join(args.formats)!r}")
    matrix = _load(args, config)
    requested = []
    for spec in args.curve:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"--curve expects PROBLEM:CANDIDATE:OPPONENT, got {spec!r}")
        requested.append(tuple(parts))
    decided = decide_comparisons(matrix, config, threads)
    outcomes = score_all(decided, config.severity_s, config.delta_p)
    curves = [
        _curve_export(decided, p, c, o, config.severity_s, args.grid_points) for p, c, o in requested
    ]
    bundle = build_bundle(outcomes, config, matrix, curves)
    emit(bundle, args.out, args.formats)
    print(format_table(LEAGUE_HEADER, league_rows(bundle.league)))
    return 0


def cmd_sensitivity(args: argparse.Namespace) -> int:
    s_list, dp_list = args.severity_list, args.delta_p_list
    if not s_list or not dp_list:
        raise ConfigError("--severity-list and --delta-p-list must be non-empty")
    base_dp = args.delta_p if args.delta_p is not None else max(dp_list)
    config = _config(args, delta_p=base_dp)
    matrix = _load(args, config)
    grid = sweep(matrix, config, s_list, dp_list, resolve_threads(args.threads))
    meta = run_metadata(
        config,
        matrix,
        severity_list=list(grid.s_values),
        delta_p_list=list(grid.delta_p_values),
        lists_sorted_internally=not grid.input_sorted,
        base_cell=list(grid.base),
        cells=len(grid.tables),
    )
    write_sensitivity(grid, args.out, meta)
    print(f"wrote {len(grid.tables)} tables to {args.out}")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    problems = [ProblemSpec(k, args.dimension, args.target) for k in args.problem]
    heuristics = [HeuristicSpec(k) for k in args.algorithms]
    matrix = generate_matrix(problems, heuristics, args.runs, args.budget, args.seed)
    write_runs(matrix, args.out)
    print(f"wrote {sum(v.size for v in matrix.entries.values())} runs to {args.out}")
    return 0


def cmd_curves(args: argparse.Namespace) -> int:
    if len(args.pair) != 2:
        raise ConfigError("--pair expects CANDIDATE,OPPONENT")
    if args.grid_points < 1:
        raise ConfigError("--grid-points must be >= 1")
    # delta_p plays no part in decisions or severity
    config = _config(args, delta_p=args.delta_p if args.delta_p is not None else 1.0)
    matrix = _load(args, config)
    candidate, opponent = args.pair
    for name in (candidate, opponent):
        if name not in matrix.algorithms:
            raise DataError(f"unknown algorithm {name!r}")
    if args.problem not in matrix.problems:
        raise DataError(f"unknown problem {args.problem!r}")
    decided = decide_comparisons(matrix, config, resolve_threads(args.threads))
    export = _curve_export(decided, args.problem, candidate, opponent, config.severity_s, args.grid_points)
    if args.out is None:
        sys.stdout.write(curve_csv(export))
    else:
        write_curve(args.out, export)
    return 0


COMMANDS = {
    "rank": cmd_rank,
    "sensitivity": cmd_sensitivity,
    "generate": cmd_generate,
    "curves": cmd_curves,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "version":
            print(f"leaguerank {__version__}")
            return 0
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"leaguerank: error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"leaguerank: error[data]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"leaguerank: error[io]: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
