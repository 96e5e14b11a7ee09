from .cache import DEFAULT_TTLS, NAMESPACES, CacheEntry, TtlCache
from .ratelimit import (
    DEFAULT_IP_LIMIT,
    DEFAULT_USER_LIMIT,
    WINDOW_SECONDS,
    FixedWindowRateLimiter,
    RateDecision,
)
from .router import ROUTE_TABLE, Gateway, resolve_upstream

__all__ = [
    "CacheEntry",
    "DEFAULT_IP_LIMIT",
    "DEFAULT_TTLS",
    "DEFAULT_USER_LIMIT",
    "FixedWindowRateLimiter",
    "Gateway",
    "NAMESPACES",
    "ROUTE_TABLE",
    "RateDecision",
    "TtlCache",
    "WINDOW_SECONDS",
    "resolve_upstream",
]
