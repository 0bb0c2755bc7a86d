"""In-memory cache for expensive tool results served repeatedly by the server."""

import threading
import time
from typing import Any, Dict, Optional, Tuple


class ResultCache:
    """Thread-safe in-memory cache with TTL support and oldest-first eviction."""

    def __init__(self, max_size: int = 64):
        """Initialize the cache."""
        self._cache: Dict[str, Tuple[Any, float, float]] = {}  # key -> (value, timestamp, ttl)
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0
        self._max_size = max_size

    def get(self, key: str) -> Optional[Any]:
        """
        Get a value from the cache.

        Args:
            key: Cache key

        Returns:
            Cached value if found and not expired, None otherwise
        """
        with self._lock:
            entry = self._cache.get(key)
            if entry is None:
                self._misses += 1
                return None
            value, timestamp, ttl = entry
            if time.monotonic() - timestamp > ttl:
                del self._cache[key]
                self._misses += 1
                return None
            self._hits += 1
            return value

    def set(self, key: str, value: Any, ttl: float = 3600.0):
        """
        Set a value in the cache.

        Args:
            key: Cache key
            value: Value to cache
            ttl: Time to live in seconds (default: 1 hour)
        """
        with self._lock:
            if key not in self._cache and len(self._cache) >= self._max_size:
                self._evict_expired()
                if len(self._cache) >= self._max_size:
                    oldest = min(self._cache, key=lambda k: self._cache[k][1])
                    del self._cache[oldest]
            self._cache[key] = (value, time.monotonic(), ttl)

    def clear(self):
        """Clear all cache entries."""
        with self._lock:
            self._cache.clear()
            self._hits = 0
            self._misses = 0

    def _evict_expired(self):
        now = time.monotonic()
        expired = [key for key, (_, timestamp, ttl) in self._cache.items() if now - timestamp > ttl]
        for key in expired:
            del self._cache[key]

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics."""
        with self._lock:
            total_requests = self._hits + self._misses
            return {
                "size": len(self._cache),
                "max_size": self._max_size,
                "hits": self._hits,
                "misses": self._misses,
                "hit_rate": self._hits / total_requests if total_requests > 0 else 0.0,
            }


# Global cache instance
_cache = ResultCache()


def get_cache() -> ResultCache:
    """Get the global cache instance."""
    return _cache


def cache_key_for_panel(panel: str, n: int) -> str:
    """Cache key of one figure panel at a grid size."""
    return f"figure1:{panel.upper()}:{n}"
