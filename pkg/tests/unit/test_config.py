"""
Tests for the configuration system.

These tests verify:
- Default path and limit resolution
- Environment variable overrides
- Custom configuration creation
- Validation and error handling
"""

import pytest
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from qfs_heights.config import (
    DEFAULT_DIRECT_MAX_E,
    DEFAULT_DIRECT_MAX_N,
    DEFAULT_DIRECT_MAX_P,
    DEFAULT_WINDOW_CAP,
    DEFAULT_WITT_WINDOW_CAP,
    Config,
    config,
    create_config,
    _get_project_root,
)
from qfs_heights.errors import ConfigError


class TestConfigDefaults:
    """Tests for default configuration behavior."""

    @pytest.mark.unit
    def test_project_root_detection(self):
        """Should correctly detect project root."""
        root = _get_project_root()

        assert (root / 'qfs').exists() or (root / 'pytest.ini').exists()

    @pytest.mark.unit
    def test_default_cache_dir(self):
        """Should have default cache directory."""
        assert isinstance(config.cache_dir, Path)
        assert config.cache_dir.name == '.cache'

    @pytest.mark.unit
    def test_default_output_dir(self):
        """Should write tables under output/."""
        assert config.output_dir.name == 'output'

    @pytest.mark.unit
    def test_default_limits(self):
        """Should use the documented limits."""
        assert config.window_cap == DEFAULT_WINDOW_CAP == 4096
        assert config.witt_window_cap == DEFAULT_WITT_WINDOW_CAP == 4096
        assert config.witt_max_p == 13
        assert config.witt_max_n == 4
        assert (config.direct_max_p, config.direct_max_n, config.direct_max_e) == (
            DEFAULT_DIRECT_MAX_P, DEFAULT_DIRECT_MAX_N, DEFAULT_DIRECT_MAX_E)


class TestEnvironmentOverrides:
    """Tests for environment variable overrides."""

    @pytest.mark.unit
    def test_cache_dir_env_override(self, tmp_path, monkeypatch):
        """Should use QFS_CACHE_DIR environment variable."""
        custom_path = tmp_path / 'custom_cache'
        monkeypatch.setenv('QFS_CACHE_DIR', str(custom_path))

        assert Config().cache_dir == custom_path

    @pytest.mark.unit
    def test_output_dir_env_override(self, tmp_path, monkeypatch):
        """Should use QFS_OUTPUT_DIR environment variable."""
        monkeypatch.setenv('QFS_OUTPUT_DIR', str(tmp_path))

        assert Config().output_dir == tmp_path

    @pytest.mark.unit
    def test_window_cap_env_override(self, monkeypatch):
        """QFS_WINDOW_CAP should reach the singleton without rebuilding it."""
        monkeypatch.setenv('QFS_WINDOW_CAP', '8192')

        assert config.window_cap == 8192

    @pytest.mark.unit
    @pytest.mark.parametrize("name,attr", [
        ('QFS_WITT_WINDOW_CAP', 'witt_window_cap'),
        ('QFS_WITT_MAX_P', 'witt_max_p'),
        ('QFS_WITT_MAX_N', 'witt_max_n'),
        ('QFS_DIRECT_MAX_P', 'direct_max_p'),
        ('QFS_DIRECT_MAX_N', 'direct_max_n'),
        ('QFS_DIRECT_MAX_E', 'direct_max_e'),
    ])
    def test_limit_env_overrides(self, monkeypatch, name, attr):
        """Each limit should read its own environment variable."""
        monkeypatch.setenv(name, '3')

        assert getattr(Config(), attr) == 3

    @pytest.mark.unit
    def test_malformed_env_value_raises(self, monkeypatch):
        """Should name the variable in the error."""
        monkeypatch.setenv('QFS_WINDOW_CAP', 'lots')

        with pytest.raises(ConfigError, match='QFS_WINDOW_CAP'):
            Config().window_cap

    @pytest.mark.unit
    def test_non_positive_env_value_raises(self, monkeypatch):
        """Limits must be positive."""
        monkeypatch.setenv('QFS_DIRECT_MAX_N', '0')

        with pytest.raises(ConfigError):
            Config().direct_max_n

    @pytest.mark.unit
    def test_blank_env_value_uses_default(self, monkeypatch):
        """An empty variable counts as unset."""
        monkeypatch.setenv('QFS_WINDOW_CAP', '')

        assert Config().window_cap == DEFAULT_WINDOW_CAP


class TestCustomConfig:
    """Tests for custom configuration creation."""

    @pytest.mark.unit
    def test_create_config_with_custom_paths(self, tmp_path):
        """Should create config with custom paths."""
        custom = create_config(cache_dir=tmp_path / 'cache', output_dir=tmp_path / 'out')

        assert custom.cache_dir == tmp_path / 'cache'
        assert custom.output_dir == tmp_path / 'out'

    @pytest.mark.unit
    def test_override_beats_environment(self, monkeypatch):
        """Explicit overrides take precedence over QFS_* variables."""
        monkeypatch.setenv('QFS_WINDOW_CAP', '100')

        assert create_config(window_cap=50).window_cap == 50

    @pytest.mark.unit
    def test_create_config_partial_override(self):
        """Should allow partial overrides."""
        custom = create_config(direct_max_n=2)

        assert custom.direct_max_n == 2
        assert custom.direct_max_p == DEFAULT_DIRECT_MAX_P
        assert custom.output_dir == custom.project_root / 'output'


class TestValidation:
    """Tests for configuration validation."""

    @pytest.mark.unit
    def test_validate_returns_dict(self):
        """Should return validation dictionary."""
        result = config.validate()

        assert isinstance(result, dict)
        assert {'project_root', 'cache_dir', 'output_dir', 'limits'} <= set(result)

    @pytest.mark.unit
    def test_validate_includes_exists_flag(self):
        """Should include exists flag for each path."""
        result = config.validate()

        for name in ('project_root', 'cache_dir', 'output_dir'):
            assert 'path' in result[name]
            assert isinstance(result[name]['exists'], bool)

    @pytest.mark.unit
    def test_validate_reports_limits(self):
        """Limits should be listed and valid by default."""
        limits = config.validate()['limits']

        assert limits['valid'] is True
        assert limits['values']['window_cap'] == DEFAULT_WINDOW_CAP


class TestEnsureDirectories:
    """Tests for directory creation."""

    @pytest.mark.unit
    def test_ensure_directories_creates_missing(self, tmp_path):
        """Should create missing directories."""
        out, cache = tmp_path / 'tables' / 'out', tmp_path / 'cache'
        custom = create_config(cache_dir=cache, output_dir=out)

        custom.ensure_directories()

        assert out.exists()
        assert cache.exists()

    @pytest.mark.unit
    def test_ensure_directories_idempotent(self, tmp_path):
        """Should not fail if directories already exist."""
        custom = create_config(cache_dir=tmp_path / 'c', output_dir=tmp_path / 'o')

        custom.ensure_directories()
        custom.ensure_directories()

        assert (tmp_path / 'o').exists()


class TestStringRepresentation:
    """Tests for string representation."""

    @pytest.mark.unit
    def test_str_contains_paths_and_limits(self):
        """Should include paths and limits."""
        result = str(config)

        assert 'Project Root' in result
        assert 'Cache' in result
        assert 'Output' in result
        assert 'Window cap' in result
        assert 'Direct verifier' in result

    @pytest.mark.unit
    def test_str_is_readable(self):
        """Should produce readable output."""
        result = str(config)

        assert '\n' in result
        assert ':' in result


class TestSingletonBehavior:
    """Tests for singleton configuration instance."""

    @pytest.mark.unit
    def test_config_is_singleton(self):
        """Should provide single config instance."""
        from qfs_heights.config import config as config1
        from qfs_heights.config import config as config2

        assert config1 is config2

    @pytest.mark.unit
    def test_get_config_returns_singleton(self):
        """get_config() should return the singleton."""
        from qfs_heights.config import get_config

        assert get_config() is config
