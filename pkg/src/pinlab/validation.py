"""Input checks shared by the estimators and the CLI."""
from __future__ import annotations

import math

import numpy as np

from .graph import Graph
from .spectral import BACKENDS


def check_graph(X) -> Graph:
    """Accept a :class:`Graph`, an ``(M, 2)`` edge array or a square 0/1 adjacency matrix."""
    if isinstance(X, Graph):
        return X
    a = np.asarray(X)
    if a.ndim == 2 and a.shape[1] == 2 and a.shape[0] != 2:
        a = a.astype(np.int64)
        n = int(a.max()) + 1 if a.size else 0
        return Graph.from_edges(n, a)
    if a.ndim == 2 and a.shape[0] == a.shape[1]:
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("adjacency matrix has self-loops")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency matrix must be 0/1")
        u, v = np.nonzero(np.triu(a, 1))
        return Graph.from_edges(a.shape[0], np.column_stack([u, v]))
    raise ValueError(f"cannot interpret input of shape {a.shape} as a graph")


def check_degrees(degrees) -> np.ndarray:
    d = np.asarray(degrees)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("degree vector must be 1-D and nonempty")
    if not np.issubdtype(d.dtype, np.integer):
        if not np.all(d == np.round(d)):
            raise ValueError("degrees must be integers")
        d = d.astype(np.int64)
    if d.min() < 1:
        raise ValueError("degrees must be >= 1")
    return d


def check_backend(backend: str) -> str:
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
    return backend


def check_fraction(p_max: float) -> float:
    p = float(p_max)
    if not 0 < p <= 1:
        raise ValueError(f"p_max must lie in (0, 1], got {p_max}")
    return p


def resolve_c_max(n_nodes: int, p_max: float = 0.3, c_max=None) -> int:
    """``c_max`` if given, else ``floor(p_max * N)`` capped at ``N - 1``.

    An explicit ``c_max >= N`` is an error rather than silently capped.
    """
    if c_max is None:
        c = min(math.floor(check_fraction(p_max) * n_nodes), n_nodes - 1)
    else:
        c = int(c_max)
        if c >= n_nodes:
            raise ValueError(f"c_max={c} must be below N={n_nodes}")
    if c < 1:
        raise ValueError(f"no admissible budget: N={n_nodes}, p_max={p_max}, c_max={c_max}")
    return c
