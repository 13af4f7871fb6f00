"""Smallest eigenvalue of grounded Laplacians, annealed and quenched."""
from typing import Iterable

import numpy as np

from ..graph import Graph
from .annealed import (AnnealedGroundedSystem, annealed_grounded_matrix, annealed_lambda1,
                       annealed_lambda1_batch, char_residual, char_samples, lambda1_for_pinned,
                       solve_levels, solve_levels_batch)
from .dense import EigenError, dense_smallest_eigen, dense_smallest_eigenpair, symmetric_eigenvalues
from .quenched import ConvergenceError, GroundedLaplacian, conjugate_gradient, quenched_lambda1
from .result import AUDIT, BoundAudit, SpectralResult

BACKENDS = ("annealed", "quenched")


def grounded_lambda1(g: Graph, pinned: Iterable[int], backend: str = "annealed",
                     tol=None) -> SpectralResult:
    """Dispatch to the annealed or quenched solver; ``tol`` overrides the solver default."""
    if backend == "annealed":
        return lambda1_for_pinned(g.degrees, pinned, *(() if tol is None else (tol,)))
    if backend == "quenched":
        return quenched_lambda1(g, pinned, *(() if tol is None else (tol,)))
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def oracle_lambda1(m: np.ndarray, free_min_degree=None) -> SpectralResult:
    lam, _, res = dense_smallest_eigenpair(m)
    return SpectralResult(lam, "dense_oracle", 1, res, free_min_degree)


__all__ = [
    "AUDIT", "BACKENDS", "AnnealedGroundedSystem", "BoundAudit", "ConvergenceError", "EigenError",
    "GroundedLaplacian", "SpectralResult", "annealed_grounded_matrix", "annealed_lambda1",
    "annealed_lambda1_batch", "char_residual", "char_samples", "conjugate_gradient",
    "dense_smallest_eigen", "dense_smallest_eigenpair", "grounded_lambda1", "lambda1_for_pinned",
    "oracle_lambda1", "quenched_lambda1", "solve_levels", "solve_levels_batch",
    "symmetric_eigenvalues",
]
