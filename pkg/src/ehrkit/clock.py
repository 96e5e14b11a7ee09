"""Injectable time sources.

No module in the platform reads the system clock directly; everything takes
a ``Clock`` so expiry, retention and rate-window tests are deterministic.
"""

from __future__ import annotations

import time
from datetime import datetime, timezone


class Clock:
    def now(self) -> float:
        """Current time as unix seconds."""
        raise NotImplementedError


class SystemClock(Clock):
    def now(self) -> float:
        return time.time()


class ManualClock(Clock):
    """Test clock advanced explicitly."""

    def __init__(self, start: float = 1_700_000_000.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        self._now += seconds

    def set(self, t: float) -> None:
        self._now = float(t)


def iso_utc(ts: float) -> str:
    """Render unix seconds as an ISO-8601 UTC timestamp."""
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat().replace("+00:00", "Z")
