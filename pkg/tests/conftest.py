"""
Pytest configuration and shared fixtures.

Fixtures cover the shipped grouped-data files, a random step-quantile corpus
built from a seeded numpy Generator, and a Typer CliRunner.
"""

import os
import tempfile
from collections.abc import Callable, Generator
from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from src.application.services.replication_runners import SerialReplicationRunner
from src.domain.entities.quantile_function import StepQuantile
from src.domain.value_objects.quadrature_settings import QuadratureSettings, VarianceSettings

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def two_bracket_csv() -> Path:
    """{0-0.9 avg 10; 0.9-1 avg 100}: mean 19."""
    return FIXTURES / "two_bracket.csv"


@pytest.fixture
def two_country_csv() -> Path:
    return FIXTURES / "two_country.csv"


@pytest.fixture
def wid_style_csv() -> Path:
    return FIXTURES / "wid_style.csv"


@pytest.fixture
def two_bracket_quantile() -> StepQuantile:
    return StepQuantile([0.0, 0.9, 1.0], [10.0, 100.0])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def step_corpus() -> Callable[..., list[StepQuantile]]:
    """Factory for random step quantiles with up to ``max_levels`` distinct levels."""

    def build(count: int, max_levels: int = 8, seed: int = 7, nonnegative: bool = False) -> list[StepQuantile]:
        generator = np.random.default_rng(seed)
        corpus = []
        for _ in range(count):
            k = int(generator.integers(2, max_levels + 1))
            inner = np.sort(generator.uniform(0.0, 1.0, size=k - 1))
            breakpoints = np.concatenate(([0.0], inner, [1.0]))
            if nonnegative:
                levels = np.sort(generator.exponential(1.0, size=k))
            else:
                levels = np.sort(generator.normal(0.0, 2.0, size=k))
            levels[-1] += 0.5
            corpus.append(StepQuantile(breakpoints, levels))
        return corpus

    return build


@pytest.fixture
def quadrature() -> QuadratureSettings:
    return QuadratureSettings()


@pytest.fixture
def variance_settings() -> VarianceSettings:
    return VarianceSettings()


@pytest.fixture
def serial_runner() -> SerialReplicationRunner:
    return SerialReplicationRunner()


@pytest.fixture
def cli_runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def temp_dir() -> Generator[Path]:
    """Provide a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield Path(tmp_dir)


# Skip tests based on environment
def pytest_collection_modifyitems(config, items):
    """Skip slow acceptance-scale tests when SKIP_SLOW_TESTS=true."""
    if os.getenv("SKIP_SLOW_TESTS", "false").lower() == "true":
        skip_slow = pytest.mark.skip(reason="Slow tests disabled")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
