"""
Configuration management for qfs_heights.

This module provides a centralized configuration system that:
- Keeps cost caps and verifier ranges out of the algorithms
- Supports environment variable overrides
- Provides sensible defaults
- Validates paths and limits

Usage:
    from qfs_heights.config import config

    # Access limits
    cap = config.window_cap
    max_n = config.witt_max_n

    # Or with environment variables:
    # QFS_WINDOW_CAP=8192 ./qfs search p1 ...
"""

import os
from pathlib import Path
from dataclasses import dataclass, field
from typing import Optional

from qfs_heights.errors import ConfigError


DEFAULT_WINDOW_CAP = 4096
DEFAULT_WITT_WINDOW_CAP = 4096
DEFAULT_WITT_MAX_P = 13
DEFAULT_WITT_MAX_N = 4
DEFAULT_DIRECT_MAX_P = 7
DEFAULT_DIRECT_MAX_N = 4
DEFAULT_DIRECT_MAX_E = 3


def _get_project_root() -> Path:
    """Find the project root directory."""
    current = Path(__file__).resolve()

    markers = ['qfs', 'pytest.ini', 'requirements.txt', '.git']

    for parent in [current] + list(current.parents):
        if any((parent / marker).exists() for marker in markers):
            return parent

    # Fallback: assume we're in src/qfs_heights/
    return current.parent.parent.parent


def _env_int(name: str) -> Optional[int]:
    """Read a positive integer environment variable, or None when unset."""
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass
class Config:
    """
    Centralized configuration for qfs_heights.

    Environment variables can override defaults:
    - QFS_CACHE_DIR: Cache directory for universal Witt polynomials
    - QFS_OUTPUT_DIR: Directory for generated tables
    - QFS_WINDOW_CAP: Largest numerator span the direct verifier may reach
    - QFS_WITT_WINDOW_CAP: Largest degree window of a rational-function Witt component
    - QFS_WITT_MAX_P / QFS_WITT_MAX_N: Cost cap for universal polynomials
    - QFS_DIRECT_MAX_P / QFS_DIRECT_MAX_N / QFS_DIRECT_MAX_E: Verifier ranges
    """

    # Project root (auto-detected)
    project_root: Path = field(default_factory=_get_project_root)

    # Overrides (take precedence over environment)
    _cache_dir: Optional[Path] = None
    _output_dir: Optional[Path] = None
    _window_cap: Optional[int] = None
    _witt_window_cap: Optional[int] = None
    _witt_max_p: Optional[int] = None
    _witt_max_n: Optional[int] = None
    _direct_max_p: Optional[int] = None
    _direct_max_n: Optional[int] = None
    _direct_max_e: Optional[int] = None

    def __post_init__(self):
        """Resolve paths after initialization."""
        if isinstance(self.project_root, str):
            self.project_root = Path(self.project_root)

    @property
    def cache_dir(self) -> Path:
        """Path to cache directory."""
        if self._cache_dir:
            return self._cache_dir

        env_path = os.environ.get('QFS_CACHE_DIR')
        if env_path:
            return Path(env_path)

        return self.project_root / '.cache'

    @property
    def output_dir(self) -> Path:
        """Path for generated theorem tables."""
        if self._output_dir:
            return self._output_dir

        env_path = os.environ.get('QFS_OUTPUT_DIR')
        if env_path:
            return Path(env_path)

        return self.project_root / 'output'

    def _limit(self, override: Optional[int], env_name: str, default: int) -> int:
        if override is not None:
            return override
        value = _env_int(env_name)
        return default if value is None else value

    @property
    def window_cap(self) -> int:
        """Largest Laurent-numerator span (in monomials) of a normal form."""
        return self._limit(self._window_cap, 'QFS_WINDOW_CAP', DEFAULT_WINDOW_CAP)

    @property
    def witt_window_cap(self) -> int:
        """Widest degree window (in monomials) Witt arithmetic over F_q(t) may produce."""
        return self._limit(self._witt_window_cap, 'QFS_WITT_WINDOW_CAP', DEFAULT_WITT_WINDOW_CAP)

    @property
    def witt_max_p(self) -> int:
        """Largest prime for universal polynomial generation."""
        return self._limit(self._witt_max_p, 'QFS_WITT_MAX_P', DEFAULT_WITT_MAX_P)

    @property
    def witt_max_n(self) -> int:
        """Longest Witt length for universal polynomial generation."""
        return self._limit(self._witt_max_n, 'QFS_WITT_MAX_N', DEFAULT_WITT_MAX_N)

    @property
    def direct_max_p(self) -> int:
        """Largest prime accepted by the direct verifier."""
        return self._limit(self._direct_max_p, 'QFS_DIRECT_MAX_P', DEFAULT_DIRECT_MAX_P)

    @property
    def direct_max_n(self) -> int:
        """Largest Witt length accepted by the direct verifier."""
        return self._limit(self._direct_max_n, 'QFS_DIRECT_MAX_N', DEFAULT_DIRECT_MAX_N)

    @property
    def direct_max_e(self) -> int:
        """Largest Frobenius exponent accepted by the direct verifier."""
        return self._limit(self._direct_max_e, 'QFS_DIRECT_MAX_E', DEFAULT_DIRECT_MAX_E)

    def ensure_directories(self) -> None:
        """Create required directories if they don't exist."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def validate(self) -> dict:
        """
        Validate configuration and return status.

        Returns:
            Dict with validation results for each path and limit
        """
        limits = {
            'window_cap': self.window_cap,
            'witt_window_cap': self.witt_window_cap,
            'witt_max_p': self.witt_max_p,
            'witt_max_n': self.witt_max_n,
            'direct_max_p': self.direct_max_p,
            'direct_max_n': self.direct_max_n,
            'direct_max_e': self.direct_max_e,
        }
        return {
            'project_root': {
                'path': str(self.project_root),
                'exists': self.project_root.exists()
            },
            'cache_dir': {
                'path': str(self.cache_dir),
                'exists': self.cache_dir.exists()
            },
            'output_dir': {
                'path': str(self.output_dir),
                'exists': self.output_dir.exists()
            },
            'limits': {
                'values': limits,
                'valid': self.witt_max_p >= 2 and self.direct_max_p >= 2
            }
        }

    def __str__(self) -> str:
        """String representation showing paths and limits."""
        return (
            f"qfs_heights Configuration:\n"
            f"  Project Root:      {self.project_root}\n"
            f"  Cache:             {self.cache_dir}\n"
            f"  Output:            {self.output_dir}\n"
            f"  Window cap:        {self.window_cap}\n"
            f"  Witt window cap:   {self.witt_window_cap}\n"
            f"  Witt cost cap:     p <= {self.witt_max_p}, n <= {self.witt_max_n}\n"
            f"  Direct verifier:   p <= {self.direct_max_p}, n <= {self.direct_max_n}, "
            f"e <= {self.direct_max_e}"
        )


# Singleton instance for easy import
config = Config()


def get_config() -> Config:
    """Get the global configuration instance."""
    return config


def create_config(
    project_root: Optional[Path] = None,
    cache_dir: Optional[Path] = None,
    output_dir: Optional[Path] = None,
    window_cap: Optional[int] = None,
    witt_window_cap: Optional[int] = None,
    witt_max_p: Optional[int] = None,
    witt_max_n: Optional[int] = None,
    direct_max_p: Optional[int] = None,
    direct_max_n: Optional[int] = None,
    direct_max_e: Optional[int] = None,
) -> Config:
    """
    Create a custom configuration instance.

    Useful for testing or running with tighter limits.

    Args:
        project_root: Override project root
        cache_dir: Override cache directory
        output_dir: Override table output directory
        window_cap: Override the direct-verifier window cap
        witt_window_cap: Override the degree-window cap of Witt arithmetic
        witt_max_p: Override the universal polynomial prime cap
        witt_max_n: Override the universal polynomial length cap
        direct_max_p: Override the direct verifier prime range
        direct_max_n: Override the direct verifier length range
        direct_max_e: Override the direct verifier exponent range

    Returns:
        New Config instance with the given overrides
    """
    return Config(
        project_root=project_root or _get_project_root(),
        _cache_dir=cache_dir,
        _output_dir=output_dir,
        _window_cap=window_cap,
        _witt_window_cap=witt_window_cap,
        _witt_max_p=witt_max_p,
        _witt_max_n=witt_max_n,
        _direct_max_p=direct_max_p,
        _direct_max_n=direct_max_n,
        _direct_max_e=direct_max_e,
    )


if __name__ == '__main__':
    print(config)
    print("\nValidation:")
    for name, info in config.validate().items():
        if 'exists' in info:
            status = "✓" if info['exists'] else "✗"
            print(f"  {status} {name}: {info['path']}")
        else:
            status = "✓" if info['valid'] else "✗"
            print(f"  {status} {name}: {info['values']}")
