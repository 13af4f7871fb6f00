from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..graph import PinningPartition
from ..spectral import SpectralResult


@dataclass(frozen=True)
class StrategyRecord:
    c: int
    partition: PinningPartition
    result: SpectralResult
    k_star: Optional[int] = None

    @property
    def lambda1(self) -> float:
        return self.result.lambda1


@dataclass
class StrategyOutput:
    """Per-budget selections of one strategy, ``c = 1..c_max`` in order."""

    strategy: str
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def budgets(self) -> list[int]:
        return [r.c for r in self.records]

    @property
    def lambdas(self) -> list[float]:
        return [r.lambda1 for r in self.records]

    def sets(self) -> list[frozenset]:
        return [r.partition.pinned for r in self.records]
