from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from leaguerank import RankingConfig, RunMatrix

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> PASS/FAIL line, filled by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])


def random_matrix(rng: np.random.Generator, k: int = 3, m: int = 2, n: int = 30, spread: float = 3.0) -> RunMatrix:
    """Normal-ish run values, one random location per cell."""
    entries = {}
    for i in range(k):
        for j in range(m):
            loc = 100 + spread * rng.normal()
            entries[(f"A{i}", f"F{j}")] = np.round(rng.normal(loc, 5.0, size=n), 3).clip(0)
    return RunMatrix(entries)


@pytest.fixture
def small_config() -> RankingConfig:
    return RankingConfig(delta_p=5.0, n_b=2000, seed=7)


@pytest.fixture
def fixture_csv() -> Path:
    return FIXTURES / "three_algorithms.csv"


@pytest.fixture
def golden_league() -> Path:
    return FIXTURES / "golden_league.csv"
