"""
Test to verify test infrastructure is working.
"""

import os

import pytest


def test_fixtures_available(F5, case_i):
    """Verify fixtures load correctly."""
    assert F5.q == 5
    assert case_i.degree() == 2


def test_environment_is_clean():
    """Verify QFS_* variables are cleared for every test."""
    assert not [k for k in os.environ if k.startswith('QFS_')]


def test_temp_cache_fixture(temp_cache_dir):
    """Verify the cache fixture redirects the cache."""
    assert os.environ['QFS_CACHE_DIR'] == str(temp_cache_dir)


@pytest.mark.unit
def test_marker_unit():
    """Test that unit marker works."""
    assert True


@pytest.mark.integration
def test_marker_integration():
    """Test that integration marker works."""
    assert True
