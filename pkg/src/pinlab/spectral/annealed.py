"""Grounded Laplacian under the degree-based annealed approximation.

With the adjacency matrix replaced by ``d d^T / K``, the grounded matrix
``D_F - d_F d_F^T / K`` is diagonal plus rank one, and its smallest
eigenvalue is the unique root in ``(0, min d_F)`` of

    g(lam) = sum_{n in F} lam d_n / (d_n - lam) - sum_{n in P} d_n.

``g`` is increasing and convex there, so after bisecting to a point right of
the root, plain Newton steps converge monotonically from the right.
Degrees are always full-graph degrees: grounding deletes rows and columns,
it does not delete nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .result import SpectralResult

DEFAULT_TOL = 1e-12
_MAX_ITER = 200


@dataclass(frozen=True)
class AnnealedGroundedSystem:
    free_degrees: np.ndarray
    pinned_degree_sum: float
    total: float

    def __post_init__(self):
        fd = np.asarray(self.free_degrees, dtype=float)
        if fd.size == 0:
            raise ValueError("free set is empty")
        if self.pinned_degree_sum < 1:
            raise ValueError("pinned degree sum must be >= 1")
        object.__setattr__(self, "free_degrees", fd)

    @classmethod
    def from_pinned(cls, degrees: Sequence[int], pinned: Iterable[int]) -> "AnnealedGroundedSystem":
        d = np.asarray(degrees, dtype=float)
        mask = np.zeros(len(d), dtype=bool)
        mask[list(pinned)] = True
        return cls(d[~mask], float(d[mask].sum()), float(d.sum()))

    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        return np.unique(self.free_degrees, return_counts=True)


def char_residual(system: AnnealedGroundedSystem, lam: float) -> float:
    """``sum_F lam d/(d-lam) - S_P``; only defined on ``[0, min d_F)``."""
    d = system.free_degrees
    if not 0 <= lam < d.min():
        raise ValueError(f"lambda={lam} outside [0, min d_F={d.min()})")
    return float(np.sum(lam * d / (d - lam)) - system.pinned_degree_sum)


def solve_levels(levels: np.ndarray, counts: np.ndarray, pinned_sum: float,
                 tol: float = DEFAULT_TOL) -> tuple[float, int, float]:
    """Root of the characteristic equation with free degrees given as a histogram.

    ``levels`` must be ascending. Returns ``(lambda, iterations, residual)``.
    """
    levels = np.asarray(levels, dtype=float)
    counts = np.asarray(counts, dtype=float)
    dmin = levels[0]
    cd = counts * levels
    cd2 = cd * levels

    def g(x):
        return float(np.dot(cd, x / (levels - x))) - pinned_sum

    lo, hi = 0.0, dmin
    x = 0.5 * dmin
    it = 0
    # bisect until x lies right of the root
    while True:
        it += 1
        gx = g(x)
        if gx >= 0.0:
            hi = x
            break
        lo = x
        x = 0.5 * (lo + hi)
        if hi - lo <= tol * dmin:
            return x, it, g(x)
    step_tol = tol * dmin
    while it < _MAX_ITER:
        it += 1
        dg = float(np.dot(cd2, 1.0 / (levels - x) ** 2))
        nx = x - gx / dg
        if not lo < nx <= x:
            nx = 0.5 * (lo + x)
        step = x - nx
        x = nx
        gx = g(x)
        if gx < 0.0:
            lo = x
        if abs(step) <= step_tol or gx == 0.0:
            break
    return x, it, gx


def annealed_lambda1(system: AnnealedGroundedSystem, tol: float = DEFAULT_TOL) -> SpectralResult:
    levels, counts = system.levels()
    lam, it, res = solve_levels(levels, counts, system.pinned_degree_sum, tol)
    return SpectralResult(lam, "annealed", it, abs(res), float(levels[0]))


def lambda1_for_pinned(degrees: Sequence[int], pinned: Iterable[int], tol: float = DEFAULT_TOL) -> SpectralResult:
    return annealed_lambda1(AnnealedGroundedSystem.from_pinned(degrees, pinned), tol)


def annealed_lambda1_batch(free_degrees: np.ndarray, pinned_sums: np.ndarray,
                           tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorised solve for many systems sharing the free-set size.

    ``free_degrees`` is ``(B, m)``; row ``b`` pairs with ``pinned_sums[b]``.
    Same bisection-then-Newton scheme as :func:`solve_levels`.
    """
    d = np.asarray(free_degrees, dtype=float)
    s = np.asarray(pinned_sums, dtype=float)
    if d.ndim != 2 or d.shape[1] == 0:
        raise ValueError("free_degrees must be a nonempty 2-D array")
    dmin = d.min(axis=1)
    lo = np.zeros(len(d))
    hi = dmin.copy()
    x = 0.5 * dmin

    def g(xv):
        return (xv[:, None] * d / (d - xv[:, None])).sum(axis=1) - s

    gx = g(x)
    left = gx < 0
    for _ in range(_MAX_ITER):
        if not left.any():
            break
        lo[left] = x[left]
        x[left] = 0.5 * (lo[left] + hi[left])
        gx = g(x)
        left = gx < 0
    hi = x.copy()
    active = np.ones(len(d), dtype=bool)
    for _ in range(_MAX_ITER):
        if not active.any():
            break
        xa = x[active]
        da = d[active]
        dg = (da * da / (da - xa[:, None]) ** 2).sum(axis=1)
        nx = xa - gx[active] / dg
        bad = ~((lo[active] < nx) & (nx <= xa))
        nx[bad] = 0.5 * (lo[active][bad] + xa[bad])
        step = xa - nx
        x[active] = nx
        gn = (nx[:, None] * da / (da - nx[:, None])).sum(axis=1) - s[active]
        gx[active] = gn
        lo_idx = np.flatnonzero(active)[gn < 0]
        lo[lo_idx] = x[lo_idx]
        done = (np.abs(step) <= tol * dmin[active]) | (gn == 0)
        active[np.flatnonzero(active)[done]] = False
    return x


def annealed_grounded_matrix(degrees: Sequence[int], pinned: Iterable[int]) -> np.ndarray:
    """Dense ``D_F - d_F d_F^T / K``, rows ordered by ascending free node id."""
    d = np.asarray(degrees, dtype=float)
    mask = np.ones(len(d), dtype=bool)
    mask[list(pinned)] = False
    if not mask.any():
        raise ValueError("free set is empty")
    df = d[mask]
    return np.diag(df) - np.outer(df, df) / d.sum()


def solve_levels_batch(levels: np.ndarray, counts: np.ndarray, pinned_sums: np.ndarray,
                       tol: float = DEFAULT_TOL) -> np.ndarray:
    """Roots for many free-degree histograms over one shared set of levels.

    ``counts`` is ``(B, Q)`` and may contain zeros; each row needs at least
    one positive count. Used by the greedy and threshold selectors, where
    candidates differ by a handful of nodes.
    """
    levels = np.asarray(levels, dtype=float)
    counts = np.asarray(counts, dtype=float)
    s = np.asarray(pinned_sums, dtype=float)
    present = counts > 0
    if not present.any(axis=1).all():
        raise ValueError("every row needs a nonempty free set")
    dmin = np.where(present, levels, np.inf).min(axis=1)
    cd = counts * levels
    cd2 = cd * levels
    safe = np.where(present, levels, 2.0 * dmin[:, None] + 1.0)

    def g(x):
        return (cd * (x[:, None] / (safe - x[:, None]))).sum(axis=1) - s

    lo = np.zeros(len(s))
    hi = dmin.copy()
    x = 0.5 * dmin
    gx = g(x)
    for _ in range(_MAX_ITER):
        left = gx < 0
        if not left.any():
            break
        lo[left] = x[left]
        x[left] = 0.5 * (lo[left] + hi[left])
        gx = g(x)
    active = np.ones(len(s), dtype=bool)
    for _ in range(_MAX_ITER):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        xa = x[idx]
        dg = (cd2[idx] / (safe[idx] - xa[:, None]) ** 2).sum(axis=1)
        nx = xa - gx[idx] / dg
        bad = ~((lo[idx] < nx) & (nx <= xa))
        nx[bad] = 0.5 * (lo[idx][bad] + xa[bad])
        step = xa - nx
        x[idx] = nx
        gn = (cd[idx] * (nx[:, None] / (safe[idx] - nx[:, None]))).sum(axis=1) - s[idx]
        gx[idx] = gn
        lo[idx[gn < 0]] = nx[gn < 0]
        done = (np.abs(step) <= tol * dmin[idx]) | (gn == 0)
        active[idx[done]] = False
    return x


def char_samples(system: AnnealedGroundedSystem, n_points: int = 50) -> np.ndarray:
    """``(lambda, g(lambda))`` on an even grid over ``[0, min d_F)``, for debugging."""
    dmin = float(system.free_degrees.min())
    grid = np.linspace(0.0, dmin, n_points + 1)[:-1]
    return np.array([(x, char_residual(system, x)) for x in grid])
