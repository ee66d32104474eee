"""
Pytest configuration and shared fixtures for qfs_heights tests.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from qfs_heights.divisors import INFINITY, ONE, ZERO, PointP1, QDivisor  # noqa: E402
from qfs_heights.finite_field import get_field  # noqa: E402

QFS_ENV_VARS = (
    'QFS_CACHE_DIR',
    'QFS_OUTPUT_DIR',
    'QFS_WINDOW_CAP',
    'QFS_WITT_WINDOW_CAP',
    'QFS_WITT_MAX_P',
    'QFS_WITT_MAX_N',
    'QFS_DIRECT_MAX_P',
    'QFS_DIRECT_MAX_N',
    'QFS_DIRECT_MAX_E',
)


@pytest.fixture(autouse=True)
def clean_qfs_env(monkeypatch):
    """Run every test with the default limits."""
    for name in QFS_ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def temp_cache_dir(tmp_path, monkeypatch) -> Path:
    """Point the polynomial cache at a temporary directory."""
    cache_dir = tmp_path / "cache"
    monkeypatch.setenv('QFS_CACHE_DIR', str(cache_dir))
    return cache_dir


@pytest.fixture
def F5():
    return get_field(5)


@pytest.fixture
def F7():
    return get_field(7)


@pytest.fixture
def F9():
    return get_field(3, 2)


@pytest.fixture
def case_i() -> QDivisor:
    """2/3 at 0, 1 and infinity."""
    c = Fraction(2, 3)
    return QDivisor.from_mapping({ZERO: c, ONE: c, INFINITY: c})


@pytest.fixture
def case_ii() -> QDivisor:
    """1/2 at 0, 3/4 at 1 and infinity."""
    return QDivisor.from_mapping({ZERO: Fraction(1, 2), ONE: Fraction(3, 4), INFINITY: Fraction(3, 4)})


@pytest.fixture
def case_iii() -> QDivisor:
    """1/2 at 0, 2/3 at 1, 5/6 at infinity."""
    return QDivisor.from_mapping({ZERO: Fraction(1, 2), ONE: Fraction(2, 3), INFINITY: Fraction(5, 6)})


@pytest.fixture
def case_iv_factory():
    """1/2 at 0, 1, infinity and lam."""
    def build(lam: int) -> QDivisor:
        half = Fraction(1, 2)
        return QDivisor.from_mapping({ZERO: half, ONE: half, INFINITY: half, PointP1.rational(lam): half})
    return build
