"""Test fixtures for algoprob."""

import pytest

from algoprob.config import reset_settings
from algoprob.distribution import build_distribution, machine_source
from algoprob.models import InitMode, PatternDistribution, SourceDescriptor, SourceKind


@pytest.fixture(autouse=True)
def reset_settings_fixture(tmp_path, monkeypatch):
    """Reset settings before each test and keep the user's config file out of it."""
    monkeypatch.setattr("algoprob.config.Path.home", lambda: tmp_path)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def d1() -> PatternDistribution:
    """Blank-tape output distribution of all 64 one-state machines."""
    return build_distribution(1, 10)


@pytest.fixture(scope="session")
def d2() -> PatternDistribution:
    """Blank-tape output distribution of all 20736 two-state machines."""
    return build_distribution(2, 1000, workers=1)


@pytest.fixture
def d1_source() -> SourceDescriptor:
    return machine_source(1, 10, InitMode.BLANK)


def make_distribution(counts: dict[str, int], name: str = "sample") -> PatternDistribution:
    """Empirical distribution with the given counts."""
    total = sum(counts.values())
    return PatternDistribution(
        source=SourceDescriptor(kind=SourceKind.EMPIRICAL, params={"name": name}),
        total_runs=total,
        contributing_runs=total,
        counts=counts,
    )


@pytest.fixture
def skewed() -> PatternDistribution:
    return make_distribution({"00": 8, "01": 4, "10": 2, "11": 1}, "skewed")


@pytest.fixture
def reversed_skew() -> PatternDistribution:
    return make_distribution({"00": 1, "01": 2, "10": 4, "11": 8}, "reversed")
