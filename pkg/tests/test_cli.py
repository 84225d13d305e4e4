from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from leaguerank import __version__
from leaguerank.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_version(capsys):
    code, out, _ = run(capsys, "version")
    assert code == 0 and out.strip() == f"leaguerank {__version__}"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "leaguerank", "version"], capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout


def test_rank_matches_golden(capsys, fixture_csv, golden_league, tmp_path):
    code, out, err = run(capsys, "rank", "--input", fixture_csv, "--delta-p", 20, "--seed", 42, "--out", tmp_path)
    assert code == 0, err
    assert (tmp_path / "league.csv").read_bytes() == golden_league.read_bytes()


def test_stdout_agrees_with_league_csv(capsys, fixture_csv, tmp_path):
    code, out, _ = run(capsys, "rank", "--input", fixture_csv, "--delta-p", 20, "--resamples", 500, "--out", tmp_path)
    assert code == 0
    printed = [line.split() for line in out.strip().splitlines()]
    file_rows = rows(tmp_path / "league.csv")
    assert printed[0] == file_rows[0]
    assert printed[2:] == file_rows[1:]  # line 1 is the dashed rule


def test_missing_delta_p_is_config_error(capsys, fixture_csv, tmp_path):
    code, _, err = run(capsys, "rank", "--input", fixture_csv, "--out", tmp_path)
    assert code == 1
    assert err.startswith("leaguerank: error[config]:") and "--delta-p" in err
    assert len(err.strip().splitlines()) == 1


@pytest.mark.parametrize(
    "extra",
    [
        ["--alpha", "1.5"],
        ["--severity", "1.0"],
        ["--delta-p", "-1"],
        ["--resamples", "10"],
        ["--formats", "pdf"],
        ["--curve", "nonsense"],
        ["--threads", "0"],
    ],
)
def test_config_errors(capsys, fixture_csv, tmp_path, extra):
    argv = ["rank", "--input", fixture_csv, "--delta-p", 20, "--resamples", 200, "--out", tmp_path, *extra]
    code, _, err = run(capsys, *argv)
    assert code == 1, err
    assert "error[config]" in err


def test_data_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("algorithm,problem,run,value\nA,F,1,abc\n")
    code, _, err = run(capsys, "rank", "--input", bad, "--delta-p", 1, "--out", tmp_path / "o")
    assert code == 2 and "error[data]" in err and "line 2" in err


def test_io_error_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "rank", "--input", tmp_path / "missing.csv", "--delta-p", 1, "--out", tmp_path / "o")
    assert code == 3 and "error[io]" in err


def test_warnings_go_to_stderr(capsys, tmp_path):
    f = tmp_path / "few.csv"
    f.write_text("algorithm,problem,run,value\nA,F,1,1\nA,F,2,2\nB,F,1,5\nB,F,2,6\n")
    code, _, err = run(capsys, "rank", "--input", f, "--delta-p", 1, "--resamples", 200, "--out", tmp_path / "o")
    assert code == 0
    assert "warning[few-runs]" in err


def test_generate_rows_and_determinism(capsys, tmp_path):
    argv = ["generate", "--problem", "onemax", "--dimension", 12, "--runs", 50, "--budget", 5000, "--seed", 3]
    assert run(capsys, *argv, "--out", tmp_path / "a.csv")[0] == 0
    assert run(capsys, *argv, "--out", tmp_path / "b.csv")[0] == 0
    data = rows(tmp_path / "a.csv")
    assert data[0] == ["algorithm", "problem", "run", "value"]
    assert len(data) - 1 == 150
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_generate_target_above_dimension(capsys, tmp_path):
    code, _, err = run(capsys, "generate", "--dimension", 10, "--target", 11, "--out", tmp_path / "x.csv")
    assert code == 1 and "target" in err
    code, _, _ = run(capsys, "generate", "--dimension", 10, "--algorithms", "sa", "--out", tmp_path / "x.csv")
    assert code == 1


def curve_body(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(lines))


def test_curves_dominant_pair(capsys, fixture_csv):
    code, out, _ = run(
        capsys, "curves", "--input", fixture_csv, "--pair", "rls,random_search", "--problem", "onemax_d12",
        "--resamples", 2000,
    )
    assert code == 0
    assert "decision=reject" in out.splitlines()[1]
    body = curve_body(out)
    assert len(body) == 101
    values = [float(r["severity"]) for r in body]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert {r["decision"] for r in body} == {"reject"}


def test_curves_identical_samples(capsys, tmp_path):
    f = tmp_path / "same.csv"
    lines = ["algorithm,problem,run,value"]
    for alg in ("A", "B"):
        lines += [f"{alg},F,{i},{v}" for i, v in enumerate([3, 9, 4, 7, 5, 8, 2, 6, 10, 1], 1)]
    f.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "curves", "--input", f, "--pair", "A,B", "--problem", "F", "--resamples", 4000)
    assert code == 0
    assert "decision=not_reject" in out
    body = curve_body(out)
    values = [float(r["severity"]) for r in body]
    assert all(b >= a for a, b in zip(values, values[1:]))
    # crosses one half next to delta = 0
    deltas = [float(r["delta"]) for r in body]
    step = deltas[1] - deltas[0]
    crossing = max(d for d, v in zip(deltas, values) if v <= 0.5)
    assert abs(crossing) <= 2 * step


def test_curves_single_point_and_file(capsys, fixture_csv, tmp_path):
    out_file = tmp_path / "c.csv"
    code, _, _ = run(
        capsys, "curves", "--input", fixture_csv, "--pair", "rls,one_plus_one_ea", "--problem", "onemax_d12",
        "--grid-points", 1, "--resamples", 500, "--out", out_file,
    )
    assert code == 0
    assert len(curve_body(out_file.read_text())) == 1


@pytest.mark.parametrize(
    "pair, problem", [("rls,nobody", "onemax_d12"), ("rls,random_search", "sphere")]
)
def test_curves_unknown_names(capsys, fixture_csv, pair, problem):
    code, _, err = run(capsys, "curves", "--input", fixture_csv, "--pair", pair, "--problem", problem)
    assert code == 2 and "unknown" in err


def test_rank_curve_flag(capsys, fixture_csv, tmp_path):
    code, _, _ = run(
        capsys, "rank", "--input", fixture_csv, "--delta-p", 20, "--resamples", 500, "--out", tmp_path,
        "--curve", "onemax_d12:rls:random_search",
    )
    assert code == 0
    assert (tmp_path / "severity_curves" / "onemax_d12__rls__vs__random_search.csv").exists()


def test_sensitivity_default_grid(capsys, fixture_csv, tmp_path):
    code, out, _ = run(capsys, "sensitivity", "--input", fixture_csv, "--resamples", 500, "--out", tmp_path)
    assert code == 0
    tables = sorted(p.name for p in (tmp_path / "sensitivity_tables").iterdir())
    assert len(tables) == 16
    assert "league_s0.8_dp500.csv" in tables
    summary = rows(tmp_path / "sensitivity.csv")
    assert summary[0] == ["s", "delta_p", "algorithm", "points", "gd", "rank", "rank_change_vs_base"]
    assert len(summary) - 1 == 16 * 3
    meta = json.loads((tmp_path / "metadata.json").read_text())
    assert meta["lists_sorted_internally"] is False
    assert meta["delta_p_list"] == [50.0, 100.0, 250.0, 500.0]


def test_sensitivity_singleton_equals_rank(capsys, fixture_csv, tmp_path):
    common = ["--input", fixture_csv, "--resamples", 500, "--seed", 9]
    assert run(capsys, "rank", *common, "--delta-p", 500, "--out", tmp_path / "r")[0] == 0
    assert run(
        capsys, "sensitivity", *common, "--severity-list", "0.8", "--delta-p-list", "500", "--out", tmp_path / "s"
    )[0] == 0
    cell = tmp_path / "s" / "sensitivity_tables" / "league_s0.8_dp500.csv"
    assert cell.read_bytes() == (tmp_path / "r" / "league.csv").read_bytes()


def test_sensitivity_unsorted_lists(capsys, fixture_csv, tmp_path):
    common = ["sensitivity", "--input", fixture_csv, "--resamples", 500]
    run(capsys, *common, "--severity-list", "0.95,0.5", "--delta-p-list", "100,20", "--out", tmp_path / "u")
    run(capsys, *common, "--severity-list", "0.5,0.95", "--delta-p-list", "20,100", "--out", tmp_path / "s")
    assert (tmp_path / "u" / "sensitivity.csv").read_bytes() == (tmp_path / "s" / "sensitivity.csv").read_bytes()
    assert json.loads((tmp_path / "u" / "metadata.json").read_text())["lists_sorted_internally"] is True
    assert json.loads((tmp_path / "s" / "metadata.json").read_text())["lists_sorted_internally"] is False


def test_threads_do_not_change_output(capsys, fixture_csv, tmp_path, monkeypatch):
    common = ["rank", "--input", fixture_csv, "--delta-p", 20, "--resamples", 1000, "--seed", 5]
    run(capsys, *common, "--threads", 1, "--out", tmp_path / "t1")
    run(capsys, *common, "--threads", 4, "--out", tmp_path / "t4")
    monkeypatch.setenv("LEAGUERANK_THREADS", "3")
    run(capsys, *common, "--out", tmp_path / "env")
    for p in sorted((tmp_path / "t1").iterdir()):
        assert p.read_bytes() == (tmp_path / "t4" / p.name).read_bytes()
        assert p.read_bytes() == (tmp_path / "env" / p.name).read_bytes()
