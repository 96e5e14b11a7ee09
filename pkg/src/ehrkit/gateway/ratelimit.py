"""Fixed-window request rate limiting.

Windows are one minute wide, keyed by floor(now / 60). Defaults follow the
platform policy: 1,000 requests per minute per IP and 100 per minute per
authenticated principal; both limits apply to authenticated traffic.
Counters only move on allowed requests, so a denied burst cannot starve a
caller who backs off.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

WINDOW_SECONDS = 60
DEFAULT_IP_LIMIT = 1000
DEFAULT_USER_LIMIT = 100


@dataclass(frozen=True)
class RateDecision:
    allowed: bool
    retry_after: int = 0
    limited_by: str | None = None  # "ip" | "principal"


class FixedWindowRateLimiter:
    def __init__(self, ip_limit: int = DEFAULT_IP_LIMIT, user_limit: int = DEFAULT_USER_LIMIT):
        self.ip_limit = ip_limit
        self.user_limit = user_limit
        self._counts: dict[tuple[str, str, int], int] = {}
        self._lock = threading.Lock()

    def check(self, ip: str, principal: str | None, now: float) -> RateDecision:
        """Increment-and-test under one lock; counts move only on allow."""
        window = int(now) // WINDOW_SECONDS
        retry_after = WINDOW_SECONDS - (int(now) % WINDOW_SECONDS)
        ip_key = ("ip", ip, window)
        user_key = ("user", principal, window) if principal is not None else None
        with self._lock:
            if self._counts.get(ip_key, 0) >= self.ip_limit:
                return RateDecision(False, retry_after, "ip")
            if user_key is not None and self._counts.get(user_key, 0) >= self.user_limit:
                return RateDecision(False, retry_after, "principal")
            self._counts[ip_key] = self._counts.get(ip_key, 0) + 1
            if user_key is not None:
                self._counts[user_key] = self._counts.get(user_key, 0) + 1
            if len(self._counts) > 65536:
                self._prune(window)
        return RateDecision(True)

    def _prune(self, current_window: int) -> None:
        stale = [k for k in self._counts if k[2] < current_window]
        for key in stale:
            del self._counts[key]
