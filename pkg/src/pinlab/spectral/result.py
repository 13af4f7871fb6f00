from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class SpectralResult:
    """Smallest grounded-Laplacian eigenvalue and how it was obtained."""

    lambda1: float
    backend: str
    iterations: int = 0
    residual: float = 0.0
    free_min_degree: Optional[float] = None
    inverse: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lambda1", float(self.lambda1))
        object.__setattr__(self, "residual", float(self.residual))
        object.__setattr__(self, "inverse", 1.0 / self.lambda1 if self.lambda1 else float("inf"))
        if self.free_min_degree is not None:
            AUDIT.record(self.backend, self.lambda1, self.free_min_degree)


class BoundAudit:
    """Running tally of ``0 < lambda1 < min_{n in F} d_n`` checks.

    Every :class:`SpectralResult` built with a known free minimum degree is
    checked here. ``touching`` counts results sitting exactly on the upper
    bound, ``exceeding`` results above it or non-positive.
    """

    def __init__(self, keep: int = 20):
        self._lock = threading.Lock()
        self.keep = keep
        self.reset()

    def reset(self):
        with getattr(self, "_lock", threading.Lock()):
            self.evaluations: dict[str, int] = {}
            self.touching: dict[str, int] = {}
            self.exceeding: dict[str, int] = {}
            self.examples: list[tuple[str, float, float]] = []

    def record(self, backend: str, lam: float, bound: float) -> None:
        with self._lock:
            self.evaluations[backend] = self.evaluations.get(backend, 0) + 1
            if 0.0 < lam < bound:
                return
            bucket = self.touching if lam == bound else self.exceeding
            bucket[backend] = bucket.get(backend, 0) + 1
            if len(self.examples) < self.keep:
                self.examples.append((backend, lam, bound))

    def violations(self, backend: Optional[str] = None) -> int:
        keys = [backend] if backend else set(self.touching) | set(self.exceeding)
        return sum(self.touching.get(k, 0) + self.exceeding.get(k, 0) for k in keys)

    def summary(self) -> str:
        parts = []
        for b in sorted(self.evaluations):
            parts.append(f"{b}: {self.evaluations[b]} evaluations, "
                         f"{self.touching.get(b, 0)} on the bound, {self.exceeding.get(b, 0)} beyond")
        return "; ".join(parts) or "no evaluations"


AUDIT = BoundAudit()
