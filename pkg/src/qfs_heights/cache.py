"""
Caching layer for universal Witt polynomials.

Generating the universal sum and product polynomials is the most expensive
step of Witt arithmetic, and the result never changes for a given (p, n).
This module keeps them on disk. Supports:
- orjson serialisation of polynomial dictionaries
- A metadata sidecar per entry with a format version
- Invalidation of entries written by another format version
- Entry statistics for `qfs config show`

Usage:
    from qfs_heights.cache import PolyCache, cached_polys

    cache = PolyCache()
    cache.set('witt_sum_p3_n2', [[[1, 0, 0, 0], 1]])
    data = cache.get('witt_sum_p3_n2')

    # Or build-on-miss
    polys = cached_polys('witt_sum', 3, 2, builder)
"""

import hashlib
import logging
from pathlib import Path
from datetime import datetime
from typing import Optional, Any, Dict, Callable, List, Tuple
from dataclasses import dataclass, asdict

import orjson

from qfs_heights.config import config

logger = logging.getLogger(__name__)

# Bump when the serialised polynomial layout changes
CACHE_FORMAT_VERSION = 2

# A polynomial is a mapping from exponent tuples to integer coefficients
Poly = Dict[Tuple[int, ...], int]


@dataclass
class CacheEntry:
    """Metadata for a cached item."""
    key: str
    created_at: str  # ISO format for JSON serialization
    format_version: int = CACHE_FORMAT_VERSION
    size_bytes: int = 0


def _is_current(meta_path: Path) -> bool:
    """True when the metadata sidecar exists, parses, and carries the current format version."""
    try:
        entry = CacheEntry(**orjson.loads(meta_path.read_bytes()))
    except (orjson.JSONDecodeError, OSError, TypeError):
        return False
    return entry.format_version == CACHE_FORMAT_VERSION


class PolyCache:
    """
    Disk-based cache for universal polynomial tables.

    Entries are plain JSON written with orjson. An entry is valid while its
    metadata carries the current format version.
    """

    def __init__(self, cache_dir: Optional[Path] = None):
        """
        Initialize the cache.

        Args:
            cache_dir: Directory for cache files (uses config default if not provided)
        """
        self.cache_dir = cache_dir or config.cache_dir
        self._writable = self._ensure_cache_dir()

    def _ensure_cache_dir(self) -> bool:
        """Create cache directory if possible; a read-only location disables writes."""
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            logger.warning("cache directory %s unavailable: %s", self.cache_dir, e)
            return False

    def _get_cache_path(self, key: str) -> Path:
        """Get the cache file path for a key."""
        key_hash = hashlib.md5(key.encode()).hexdigest()[:16]
        safe_key = ''.join(c if c.isalnum() or c in '-_' else '_' for c in key)[:32]
        return self.cache_dir / f"{safe_key}_{key_hash}.json"

    def _get_meta_path(self, key: str) -> Path:
        """Get the metadata file path for a key."""
        return self._get_cache_path(key).with_suffix('.meta.json')

    def _is_valid(self, key: str) -> bool:
        """
        Check if a cache entry is valid.

        Returns False if the entry or its metadata is missing, unreadable, or
        was written by another format version.
        """
        if not self._get_cache_path(key).exists():
            return False
        return _is_current(self._get_meta_path(key))

    def get(self, key: str) -> Optional[Any]:
        """
        Get a value from the cache.

        Args:
            key: Cache key

        Returns:
            Cached value or None if not found/invalid
        """
        if not self._is_valid(key):
            return None
        try:
            return orjson.loads(self._get_cache_path(key).read_bytes())
        except (orjson.JSONDecodeError, OSError):
            return None

    def set(self, key: str, value: Any) -> bool:
        """
        Store a value in the cache.

        Args:
            key: Cache key
            value: Value to cache (must be orjson-serializable)

        Returns:
            True if successfully cached
        """
        if not self._writable:
            return False

        cache_path = self._get_cache_path(key)
        meta_path = self._get_meta_path(key)

        try:
            cache_path.write_bytes(orjson.dumps(value))
            entry = CacheEntry(
                key=key,
                created_at=datetime.now().isoformat(),
                size_bytes=cache_path.stat().st_size,
            )
            meta_path.write_bytes(orjson.dumps(asdict(entry)))
            return True

        except (TypeError, OSError) as e:
            logger.debug("could not cache %s: %s", key, e)
            cache_path.unlink(missing_ok=True)
            meta_path.unlink(missing_ok=True)
            return False

    def get_stats(self) -> Dict[str, Any]:
        """Entry count, stale entries from another format version, and size on disk."""
        data_files = [f for f in self.cache_dir.glob('*.json')
                      if not f.name.endswith('.meta.json')]
        stale = sum(1 for f in data_files if not _is_current(f.with_suffix('.meta.json')))
        total_size = sum(f.stat().st_size for f in data_files if f.exists())
        return {
            'entries': len(data_files),
            'stale': stale,
            'total_size_kb': round(total_size / 1024, 1),
            'cache_dir': str(self.cache_dir),
        }


# Global cache instance
_cache: Optional[PolyCache] = None


def get_cache() -> PolyCache:
    """Get or create the global cache instance."""
    global _cache
    if _cache is None:
        _cache = PolyCache()
    return _cache


def encode_polys(polys: List[Poly]) -> List[List[List[Any]]]:
    """Turn a list of polynomials into JSON-friendly nested lists."""
    return [[[list(exps), coeff] for exps, coeff in sorted(poly.items())] for poly in polys]


def decode_polys(data: List[List[List[Any]]]) -> List[Poly]:
    """Inverse of encode_polys."""
    return [{tuple(exps): coeff for exps, coeff in poly} for poly in data]


def cached_polys(kind: str, p: int, n: int,
                 builder: Callable[[], List[Poly]],
                 cache: Optional[PolyCache] = None) -> List[Poly]:
    """
    Fetch a polynomial table from the cache, building and storing it on a miss.

    Args:
        kind: Table name, e.g. 'witt_sum'
        p: Prime
        n: Witt length
        builder: Zero-argument callable producing the polynomials
        cache: Cache to use (global cache if not provided)

    Returns:
        List of polynomials
    """
    cache = cache or get_cache()
    key = f"{kind}_p{p}_n{n}"

    hit = cache.get(key)
    if hit is not None:
        try:
            return decode_polys(hit)
        except (TypeError, ValueError):
            logger.debug("discarding malformed cache entry %s", key)

    logger.info("generating %s polynomials for p=%d, n=%d", kind, p, n)
    polys = builder()
    cache.set(key, encode_polys(polys))
    return polys
