"""Wall-clock step timing for pipeline benchmarking."""

from __future__ import annotations

import time
from contextlib import contextmanager


class StepTimer:
    """Accumulates named step durations plus a running total."""

    def __init__(self):
        self.seconds: dict[str, float] = {}
        self._started = time.perf_counter()

    @contextmanager
    def step(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.seconds[name] = self.seconds.get(name, 0.0) + time.perf_counter() - t0

    def add(self, name: str, seconds: float) -> None:
        self.seconds[name] = self.seconds.get(name, 0.0) + seconds

    def as_dict(self) -> dict[str, float]:
        out = dict(self.seconds)
        out["total"] = time.perf_counter() - self._started
        return out
