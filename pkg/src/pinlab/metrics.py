"""Effectiveness curves and their scalar summaries."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .graph import Graph
from .spectral import grounded_lambda1
from .strategies import StrategyOutput


@dataclass(frozen=True)
class CurvePoint:
    c: int
    p: float
    pinned: tuple
    lambda1: float
    inv_lambda1: float
    d_hm: Optional[int]
    k_star: Optional[int] = None
    selection_lambda1: Optional[float] = None
    free_min_degree: Optional[float] = None


@dataclass
class EffectivenessCurve:
    strategy: str
    backend: str
    n_nodes: int
    seeds: tuple = ()
    points: list = field(default_factory=list)
    labels: Optional[np.ndarray] = None  # original node ids, for reporting

    def __len__(self):
        return len(self.points)

    @property
    def inverse_values(self) -> np.ndarray:
        return np.array([pt.inv_lambda1 for pt in self.points])


class CurveEvaluationError(RuntimeError):
    def __init__(self, c: int, cause: Exception):
        super().__init__(f"c={c}: {cause}")
        self.c = c


def hamming(a: Iterable[int], b: Iterable[int]) -> int:
    """Size of the symmetric difference."""
    return len(set(a) ^ set(b))


def evaluate_curve(output: StrategyOutput, g: Graph, backend: str, seeds=(), tol=None) -> EffectivenessCurve:
    """Re-evaluate every selected set under ``backend`` and fill in Hamming distances."""
    curve = EffectivenessCurve(output.strategy, backend, g.n_nodes, tuple(seeds))
    prev = None
    for rec in output:
        if not rec.c < g.n_nodes:
            raise ValueError(f"budget c={rec.c} is not below N={g.n_nodes}")
        pinned = tuple(sorted(rec.partition.pinned))
        try:
            res = grounded_lambda1(g, pinned, backend, tol)
        except (ArithmeticError, ValueError) as exc:
            raise CurveEvaluationError(rec.c, exc) from exc
        curve.points.append(CurvePoint(
            rec.c, rec.c / g.n_nodes, pinned, res.lambda1, res.inverse,
            None if prev is None else hamming(prev, pinned),
            rec.k_star, rec.result.lambda1, res.free_min_degree))
        prev = pinned
    return curve


def pinning_efficiency(curve) -> float:
    """omega: mean of ``1/lambda1`` over all budgets."""
    v = _values(curve)
    return float(v.mean())


def endpoint_effectiveness(curve) -> float:
    """delta: ``1/lambda1`` at the largest budget."""
    return float(_values(curve)[-1])


def _values(curve) -> np.ndarray:
    v = curve.inverse_values if isinstance(curve, EffectivenessCurve) else np.asarray(curve, dtype=float)
    if v.size == 0:
        raise ValueError("empty curve")
    return v


@dataclass(frozen=True)
class Improvement:
    omega: float
    delta: float


def improvement_ratios(ours: dict, best_suboptimal: dict) -> Improvement:
    """Relative improvements in percent; negative when the baseline is better."""
    if best_suboptimal["omega"] <= 0 or best_suboptimal["delta"] <= 0:
        raise ValueError("baseline values must be positive")
    return Improvement(
        100.0 * (best_suboptimal["omega"] - ours["omega"]) / best_suboptimal["omega"],
        100.0 * (best_suboptimal["delta"] - ours["delta"]) / best_suboptimal["delta"])
