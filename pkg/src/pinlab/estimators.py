"""Scikit-learn style wrappers around the selectors.

``fit`` takes a graph (a :class:`~pinlab.graph.Graph`, an edge array or an
adjacency matrix) and records the pinned set for every budget
``c = 1..c_max``. ``transform`` returns those sets as a ``(c_max, N)`` 0/1
matrix, row ``c - 1`` for budget ``c``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .graph import degree_histogram
from .metrics import evaluate_curve, pinning_efficiency
from .strategies import (RANKERS, StrategyOutput, StrategyRecord, a1_curve, exhaustive_curve,
                         select_a2_curve, select_bfg_curve, top_k_set)
from .spectral import grounded_lambda1
from .validation import check_backend, check_graph, resolve_c_max


class _PinningEstimator(TransformerMixin, BaseEstimator):
    def _select(self, g, c_max) -> StrategyOutput:
        raise NotImplementedError

    def fit(self, X, y=None):
        g = check_graph(X)
        c_max = resolve_c_max(g.n_nodes, self.p_max, self.c_max)
        self.graph_ = g
        self.n_nodes_ = g.n_nodes
        self.output_ = self._select(g, c_max)
        self.pinned_sets_ = [tuple(sorted(s)) for s in self.output_.sets()]
        self.lambda1_ = np.array(self.output_.lambdas)
        return self

    def transform(self, X):
        check_is_fitted(self, "output_")
        g = check_graph(X)
        if g.n_nodes != self.n_nodes_:
            raise ValueError(f"fitted on {self.n_nodes_} nodes, got {g.n_nodes}")
        out = np.zeros((len(self.pinned_sets_), self.n_nodes_), dtype=np.int8)
        for i, s in enumerate(self.pinned_sets_):
            out[i, list(s)] = 1
        return out

    def curve(self, backend=None):
        check_is_fitted(self, "output_")
        return evaluate_curve(self.output_, self.graph_, check_backend(backend or "annealed"))

    def score(self, X, y=None):
        """Negative pinning efficiency of the fitted sets on ``X`` (higher is better)."""
        check_is_fitted(self, "output_")
        return -pinning_efficiency(self.curve())


class ThresholdPinning(_PinningEstimator):
    """Low-degree layers plus highest-degree completion (``A1`` or ``A2``)."""

    def __init__(self, rule="A2", p_max=0.3, c_max=None):
        self.rule = rule
        self.p_max = p_max
        self.c_max = c_max

    def _select(self, g, c_max):
        hist = degree_histogram(g.degrees)
        if self.rule == "A2":
            out = select_a2_curve(hist, c_max)
        elif self.rule == "A1":
            out = a1_curve(hist, c_max)
        else:
            raise ValueError(f"rule must be 'A1' or 'A2', got {self.rule!r}")
        self.k_star_ = np.array([r.k_star for r in out])
        return out


class CentralityPinning(_PinningEstimator):
    """Top-c nodes of a centrality ranking (DC, BC, CC or CR)."""

    def __init__(self, measure="DC", p_max=0.3, c_max=None, backend="annealed"):
        self.measure = measure
        self.p_max = p_max
        self.c_max = c_max
        self.backend = backend

    def _select(self, g, c_max):
        if self.measure not in RANKERS:
            raise ValueError(f"measure must be one of {sorted(RANKERS)}, got {self.measure!r}")
        backend = check_backend(self.backend)
        ranking = RANKERS[self.measure](g)
        self.scores_ = ranking.scores
        out = StrategyOutput(self.measure)
        for c in range(1, c_max + 1):
            p = top_k_set(ranking, c)
            out.records.append(StrategyRecord(c, p, grounded_lambda1(g, p.pinned, backend)))
        return out


class GreedyPinning(_PinningEstimator):
    def __init__(self, backend="quenched", p_max=0.3, c_max=None):
        self.backend = backend
        self.p_max = p_max
        self.c_max = c_max

    def _select(self, g, c_max):
        return select_bfg_curve(g, c_max, check_backend(self.backend))


class ExhaustivePinning(_PinningEstimator):
    def __init__(self, backend="annealed", p_max=0.3, c_max=None):
        self.backend = backend
        self.p_max = p_max
        self.c_max = c_max

    def _select(self, g, c_max):
        return exhaustive_curve(g, c_max, check_backend(self.backend))


def make_estimator(strategy: str, backend: str = "annealed", p_max=0.3, c_max=None) -> _PinningEstimator:
    """Estimator for a strategy tag; ``backend`` is the selection backend where one applies."""
    if strategy in ("A1", "A2"):
        return ThresholdPinning(strategy, p_max, c_max)
    if strategy == "EXH":
        return ExhaustivePinning(backend, p_max, c_max)
    if strategy == "BFG":
        return GreedyPinning(backend, p_max, c_max)
    if strategy in RANKERS:
        return CentralityPinning(strategy, p_max, c_max)
    raise ValueError(f"unknown strategy {strategy!r}")


STRATEGIES = ("A1", "A2", "EXH", "BFG", "DC", "BC", "CC", "CR")
