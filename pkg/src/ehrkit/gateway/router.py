"""Path-prefix routing to upstream services.

Routing is a pure function of the path. The gateway retries a failed
upstream call exactly once, then reports a bad-gateway error: no retry
storms.
"""

from __future__ import annotations

from typing import Callable

from ..errors import NotFoundError, UpstreamError

# Longest prefix wins; every entry names the owning service.
ROUTE_TABLE: tuple[tuple[str, str], ...] = (
    ("/auth/", "identity"),
    ("/api/user/", "user-directory"),
    ("/api/patients", "user-directory"),
    ("/api/doctors", "user-directory"),
    ("/api/admissions", "user-directory"),
    ("/api/requests/", "user-directory"),
    ("/api/hospitals", "user-directory"),
    ("/api/records/", "patient-records"),
    ("/api/records", "patient-records"),
    ("/api/ai/", "ai-orchestrator"),
    ("/chat", "ai-orchestrator"),
    ("/api/audit", "audit-log"),
)


def resolve_upstream(path: str) -> str:
    matches = [(prefix, name) for prefix, name in ROUTE_TABLE if path.startswith(prefix)]
    if not matches:
        raise NotFoundError(f"no route for {path}")
    return max(matches, key=lambda m: len(m[0]))[1]


class Gateway:
    """Dispatches requests to registered upstream callables."""

    def __init__(self, upstreams: dict[str, Callable[..., object]] | None = None):
        self._upstreams = dict(upstreams or {})

    def register(self, name: str, handler: Callable[..., object]) -> None:
        self._upstreams[name] = handler

    def route(self, path: str, *args, **kwargs):
        name = resolve_upstream(path)
        handler = self._upstreams.get(name)
        if handler is None:
            raise UpstreamError(f"upstream {name} is not registered")
        try:
            return handler(path, *args, **kwargs)
        except UpstreamError:
            raise
        except ConnectionError:
            # Single retry, then give up.
            try:
                return handler(path, *args, **kwargs)
            except ConnectionError as exc:
                raise UpstreamError(f"upstream {name} unreachable") from exc
