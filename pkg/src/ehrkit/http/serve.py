"""Run the platform HTTP server, foreground (CLI) or background (tests)."""

from __future__ import annotations

import argparse
import socket
import threading
import time

import uvicorn

from ..platform import Platform
from .app import create_app


class BackgroundServer:
    """Uvicorn in a daemon thread with a readiness gate."""

    def __init__(self, platform: Platform, host: str = "127.0.0.1", port: int = 0):
        if port == 0:
            port = free_port()
        self.host = host
        self.port = port
        self.base_url = f"http://{host}:{port}"
        config = uvicorn.Config(
            create_app(platform), host=host, port=port, log_level="warning", access_log=False
        )
        self._server = uvicorn.Server(config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def start(self, timeout: float = 15.0) -> "BackgroundServer":
        self._thread.start()
        deadline = time.time() + timeout
        while time.time() < deadline:
            if self._server.started:
                return self
            time.sleep(0.05)
        raise RuntimeError("server did not start in time")

    def stop(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10.0)

    def __enter__(self) -> "BackgroundServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ehrkit-serve", description="Run the EHR platform server.")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--signing-key", default=None, help="token signing key (random if omitted)")
    parser.add_argument("--demo", action="store_true", help="seed demo data and print the ids")
    parser.add_argument("--user-rate-limit", type=int, default=100)
    parser.add_argument("--ip-rate-limit", type=int, default=1000)
    args = parser.parse_args(argv)

    platform = Platform(
        signing_key=args.signing_key,
        user_rate_limit=args.user_rate_limit,
        ip_rate_limit=args.ip_rate_limit,
    )
    if args.demo:
        from ..demo import seed_demo

        info = seed_demo(platform)
        for key, value in info.items():
            print(f"{key}: {value}")
    uvicorn.run(create_app(platform), host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
