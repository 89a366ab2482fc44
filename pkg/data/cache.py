"""
In-memory keyed store for values that are expensive to rebuild within one
process, such as thinning majorants.
"""

import logging
from typing import Any, Callable, Hashable

logger = logging.getLogger(__name__)

_cache: dict[Hashable, Any] = {}


def get_or_compute(key: Hashable, compute: Callable[[], Any]) -> Any:
    """Return the cached value for key, computing and storing it on a miss."""
    value = _cache.get(key)
    if value is None:
        value = compute()
        _cache[key] = value
        logger.debug("cache miss for %s", key)
    return value


def clear() -> None:
    """Clear the entire in-memory cache."""
    _cache.clear()
