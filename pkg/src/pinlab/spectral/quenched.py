"""Grounded Laplacian of the actual graph (quenched evaluation)."""
from __future__ import annotations

from typing import Iterable

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ..graph import Graph
from .dense import dense_smallest_eigenpair
from .result import SpectralResult

DENSE_FALLBACK = 512


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class GroundedLaplacian:
    """Principal submatrix of ``L = D - A`` on the free nodes, as an operator.

    The diagonal keeps full-graph degrees; off-diagonal entries are ``-1`` for
    edges with both ends free. Row order is ascending free node id.
    """

    def __init__(self, g: Graph, pinned: Iterable[int]):
        mask = np.ones(g.n_nodes, dtype=bool)
        pinned = np.fromiter((int(x) for x in pinned), dtype=np.int64)
        mask[pinned] = False
        if not mask.any():
            raise ValueError("free set is empty")
        self.free = np.flatnonzero(mask)
        remap = np.full(g.n_nodes, -1, dtype=np.int64)
        remap[self.free] = np.arange(len(self.free))
        e = remap[g.edges]
        e = e[(e[:, 0] >= 0) & (e[:, 1] >= 0)]
        self.u, self.v = e[:, 0], e[:, 1]
        self.diag = g.degrees[self.free].astype(float)
        self.n = len(self.free)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        out = self.diag * x
        out -= np.bincount(self.u, weights=x[self.v], minlength=self.n)
        out -= np.bincount(self.v, weights=x[self.u], minlength=self.n)
        return out

    def todense(self) -> np.ndarray:
        m = np.diag(self.diag)
        m[self.u, self.v] -= 1.0
        m[self.v, self.u] -= 1.0
        return m

    def blocks(self) -> list:
        """Row index arrays of the connected blocks of ``L_F``, in order of first row."""
        adj = sparse.coo_matrix((np.ones(len(self.u)), (self.u, self.v)), shape=(self.n, self.n))
        _, label = csgraph.connected_components(adj, directed=False)
        order = np.argsort(label, kind="stable")
        cuts = np.flatnonzero(np.diff(label[order])) + 1
        return np.split(order, cuts)

    def restrict(self, rows: np.ndarray) -> "GroundedLaplacian":
        sub = object.__new__(GroundedLaplacian)
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[rows] = np.arange(len(rows))
        keep = remap[self.u] >= 0
        sub.free = self.free[rows]
        sub.u, sub.v = remap[self.u[keep]], remap[self.v[keep]]
        sub.diag = self.diag[rows]
        sub.n = len(rows)
        return sub


def conjugate_gradient(matvec, b: np.ndarray, x0=None, rtol: float = 1e-12,
                       maxiter: int | None = None) -> tuple[np.ndarray, int]:
    """Solve ``A x = b`` for symmetric positive definite ``A``."""
    n = len(b)
    maxiter = maxiter or 10 * n + 100
    x = np.zeros(n) if x0 is None else x0.copy()
    r = b - matvec(x)
    p = r.copy()
    rr = r @ r
    bnorm = np.linalg.norm(b) or 1.0
    for it in range(1, maxiter + 1):
        if np.sqrt(rr) <= rtol * bnorm:
            return x, it - 1
        ap = matvec(p)
        alpha = rr / (p @ ap)
        x += alpha * p
        r -= alpha * ap
        rr_new = r @ r
        p = r + (rr_new / rr) * p
        rr = rr_new
    res = float(np.sqrt(rr) / bnorm)
    if res > rtol:
        raise ConvergenceError(f"CG stalled after {maxiter} iterations (relative residual {res:.3e})", res)
    return x, maxiter


def quenched_lambda1(g: Graph, pinned: Iterable[int], tol: float = 1e-10, seed: int = 0,
                     max_outer: int = 2000, dense_fallback: int = DENSE_FALLBACK) -> SpectralResult:
    """Smallest eigenvalue of the grounded Laplacian of ``g`` with ``pinned`` removed.

    ``L_F`` is block diagonal over the components of the free subgraph, so
    each block is solved separately and the minimum taken; a free node with
    no free neighbour is a 1x1 block whose eigenvalue is its degree, exactly.
    Blocks up to ``dense_fallback`` rows go to the dense eigensolver; larger
    ones use inverse power iteration with CG inner solves, stopping when the
    Rayleigh quotient changes by at most ``tol`` (relative).
    """
    pinned = list(pinned)
    if not pinned:
        raise ValueError("pinned set is empty")
    op = GroundedLaplacian(g, pinned)
    dmin = float(op.diag.min())
    best, iters, resid = np.inf, 0, 0.0
    for rows in op.blocks():
        if len(rows) == 1:
            lam, it, res = float(op.diag[rows[0]]), 0, 0.0
        else:
            lam, it, res = _block_lambda1(op.restrict(rows), tol, seed, max_outer, dense_fallback)
        iters += it
        if lam < best:
            best, resid = lam, res
    return SpectralResult(best, "quenched", iters, resid, dmin)


def _block_lambda1(op: GroundedLaplacian, tol, seed, max_outer, dense_fallback):
    if op.n <= dense_fallback:
        lam, _, res = dense_smallest_eigenpair(op.todense())
        return lam, 1, res
    rng = np.random.Generator(np.random.Philox(seed))
    x = rng.random(op.n) + 0.5
    x /= np.linalg.norm(x)
    lam_prev = np.inf
    for outer in range(1, max_outer + 1):
        # L y = x with x close to the eigenvector, so x / lambda is a good start
        y, _ = conjugate_gradient(op.matvec, x, x0=None if np.isinf(lam_prev) else x / lam_prev)
        lam = float((y @ x) / (y @ y))
        x = y / np.linalg.norm(y)
        if abs(lam - lam_prev) <= tol * lam:
            break
        lam_prev = lam
    res = float(np.linalg.norm(op.matvec(x) - lam * x))
    return lam, outer, res
