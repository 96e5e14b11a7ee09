"""Virtual-user scenario runner.

One worker thread per virtual user: request, status check, think time,
repeat. A controller loop reconciles the live worker count against the
plan's interpolated target every tick; a worker told to stop finishes its
in-flight iteration and exits, and it stops counting as active the moment
it is signalled. Mid-run request failures become failed samples, never
aborts; only an unreachable target at startup is fatal.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from ..errors import SetupError
from .plan import StagePlan
from .report import LoadReport, Sample

# Returns an HTTP status code; 0 signals a transport error.
RequestFn = Callable[[], int]

CONTROLLER_TICK = 0.05


def default_request_fn(url: str, token: str | None, timeout: float = 10.0) -> RequestFn:
    import httpx

    client = httpx.Client(timeout=timeout)
    headers = {"Authorization": f"Bearer {token}"} if token else {}

    def do_request() -> int:
        try:
            return client.get(url, headers=headers).status_code
        except Exception:
            return 0

    return do_request


@dataclass
class _Collector:
    lock: threading.Lock = field(default_factory=threading.Lock)
    samples: list[Sample] = field(default_factory=list)
    per_vu: dict[int, int] = field(default_factory=dict)

    def record(self, sample: Sample) -> None:
        with self.lock:
            self.samples.append(sample)
            self.per_vu[sample.vu] = self.per_vu.get(sample.vu, 0) + 1


class _Worker:
    def __init__(self, vu_id: int, request_fn: RequestFn, think_time: float, collector: _Collector, epoch: float):
        self.vu_id = vu_id
        self.stop_event = threading.Event()
        self._thread = threading.Thread(
            target=self._loop, args=(request_fn, think_time, collector, epoch), daemon=True
        )
        self._thread.start()

    def _loop(self, request_fn: RequestFn, think_time: float, collector: _Collector, epoch: float) -> None:
        while not self.stop_event.is_set():
            t0 = time.perf_counter()
            status = request_fn()
            duration_ms = (time.perf_counter() - t0) * 1000.0
            collector.record(
                Sample(start=time.time(), duration_ms=duration_ms, status=status, vu=self.vu_id)
            )
            self.stop_event.wait(think_time)

    def stop(self) -> None:
        self.stop_event.set()

    def join(self, timeout: float | None = None) -> None:
        self._thread.join(timeout)


def run_scenario(
    plan: StagePlan,
    target_url: str = "",
    auth_token: str | None = None,
    *,
    request_fn: RequestFn | None = None,
    controller_tick: float = CONTROLLER_TICK,
) -> LoadReport:
    if request_fn is None:
        if not target_url:
            raise SetupError("either a target url or a request function is required")
        request_fn = default_request_fn(target_url, auth_token)

    # Reachability probe: a transport error now is a setup problem, not a sample.
    if request_fn() == 0:
        raise SetupError(f"target unreachable at start: {target_url or 'request_fn'}")

    collector = _Collector()
    workers: list[_Worker] = []
    vu_series: list[tuple[float, int]] = []
    next_vu_id = 0
    started_at = time.time()
    start = time.perf_counter()
    total = plan.total_duration

    while True:
        t = time.perf_counter() - start
        if t >= total:
            break
        target = int(plan.target_at(t) + 0.5)
        while len(workers) < target:
            next_vu_id += 1
            workers.append(_Worker(next_vu_id, request_fn, plan.think_time, collector, started_at))
        while len(workers) > target:
            workers.pop().stop()
        vu_series.append((t, len(workers)))
        time.sleep(controller_tick)

    for worker in workers:
        worker.stop()
    for worker in workers:
        worker.join(timeout=30.0)
    finished_at = time.time()

    return LoadReport(
        samples=list(collector.samples),
        vu_series=vu_series,
        per_vu_iterations=dict(collector.per_vu),
        started_at=started_at,
        finished_at=finished_at,
    )
