"""Smallest eigenpair of a dense symmetric matrix, without LAPACK.

Householder reduction to tridiagonal form, implicit QL with Wilkinson shifts
for the eigenvalues, then inverse iteration on the tridiagonal matrix and
back-transformation for the eigenvector used in the residual check.
"""
from __future__ import annotations

import math

import numba
import numpy as np

ORACLE_CAP = 2000
SYMMETRY_TOL = 1e-10


class EigenError(ArithmeticError):
    pass


@numba.njit(cache=True)
def _householder_tridiagonal(a):
    n = a.shape[0]
    diag = np.zeros(n)
    off = np.zeros(n)
    vecs = np.zeros((n, n))  # row k holds the k-th reflector
    p = np.zeros(n)
    v = np.zeros(n)
    for k in range(n - 2):
        norm2 = 0.0
        for i in range(k + 1, n):
            norm2 += a[k, i] * a[k, i]
        if norm2 == 0.0:
            off[k] = 0.0
            continue
        x0 = a[k, k + 1]
        alpha = -math.sqrt(norm2) if x0 > 0 else math.sqrt(norm2)
        vnorm2 = norm2 - x0 * x0 + (x0 - alpha) ** 2
        vn = math.sqrt(vnorm2)
        for i in range(k + 1, n):
            v[i] = a[k, i] / vn
        v[k + 1] = (x0 - alpha) / vn
        off[k] = alpha
        # p = A22 v ; q = p - (v.p) v ; A22 -= 2 (v q^T + q v^T)
        kv = 0.0
        for i in range(k + 1, n):
            s = 0.0
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            p[i] = s
            kv += v[i] * s
        for i in range(k + 1, n):
            p[i] -= kv * v[i]
        for i in range(k + 1, n):
            vi = 2.0 * v[i]
            pi = 2.0 * p[i]
            for j in range(k + 1, n):
                a[i, j] -= vi * p[j] + pi * v[j]
        for i in range(k + 1, n):
            vecs[k, i] = v[i]
    for i in range(n):
        diag[i] = a[i, i]
    if n >= 2:
        off[n - 2] = a[n - 1, n - 2]
    off[n - 1] = 0.0
    return diag, off, vecs


@numba.njit(cache=True)
def _tridiagonal_ql(d, e):
    """Eigenvalues of the tridiagonal (d, e); e[i] couples i and i+1. In place."""
    n = d.shape[0]
    eps = 2.220446049250313e-16
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


@numba.njit(cache=True)
def _tridiagonal_inverse_iteration(diag, off, shift, iters, scale):
    """Eigenvector of the tridiagonal matrix near ``shift`` (LU with partial pivoting)."""
    n = diag.shape[0]
    a = diag - shift
    b = np.zeros(max(n - 1, 1))
    c = np.zeros(max(n - 1, 1))
    for i in range(n - 1):
        b[i] = off[i]
        c[i] = off[i]
    b2 = np.zeros(max(n - 2, 1))
    mult = np.zeros(max(n - 1, 1))
    swap = np.zeros(max(n - 1, 1), dtype=np.bool_)
    tiny = 1e-14 * scale + 1e-300
    for i in range(n - 1):
        if abs(a[i]) >= abs(c[i]):
            if a[i] == 0.0:
                a[i] = tiny
            f = c[i] / a[i]
            mult[i] = f
            a[i + 1] -= f * b[i]
        else:
            f = a[i] / c[i]
            mult[i] = f
            swap[i] = True
            a[i] = c[i]
            tmp = a[i + 1]
            a[i + 1] = b[i] - f * tmp
            if i < n - 2:
                b2[i] = b[i + 1]
                b[i + 1] = -f * b2[i]
            b[i] = tmp
    if a[n - 1] == 0.0:
        a[n - 1] = tiny
    x = np.ones(n)
    for _ in range(iters):
        for i in range(n - 1):
            if swap[i]:
                t = x[i]
                x[i] = x[i + 1]
                x[i + 1] = t - mult[i] * x[i]
            else:
                x[i + 1] -= mult[i] * x[i]
        x[n - 1] /= a[n - 1]
        if n >= 2:
            x[n - 2] = (x[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (x[i] - b[i] * x[i + 1] - b2[i] * x[i + 2]) / a[i]
        nrm = 0.0
        for i in range(n):
            nrm += x[i] * x[i]
        nrm = math.sqrt(nrm)
        for i in range(n):
            x[i] /= nrm
    return x


@numba.njit(cache=True)
def _back_transform(vecs, y):
    n = y.shape[0]
    for k in range(n - 3, -1, -1):
        s = 0.0
        for i in range(k + 1, n):
            s += vecs[k, i] * y[i]
        if s != 0.0:
            for i in range(k + 1, n):
                y[i] -= 2.0 * s * vecs[k, i]
    return y


def tridiagonalize(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d, e, _ = _householder_tridiagonal(np.array(m, dtype=float, order="C"))
    return d, e[:-1]


def symmetric_eigenvalues(m: np.ndarray) -> np.ndarray:
    """All eigenvalues, ascending."""
    m = _check(m)
    d, e, _ = _householder_tridiagonal(m.copy())
    if _tridiagonal_ql(d, e) != 0:
        raise EigenError("implicit QL did not converge")
    return np.sort(d)


def _check(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError("expected a nonempty square matrix")
    if m.shape[0] > ORACLE_CAP:
        raise ValueError(f"matrix of size {m.shape[0]} exceeds the dense cap {ORACLE_CAP}")
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.T).max() > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return np.ascontiguousarray(0.5 * (m + m.T))


def dense_smallest_eigenpair(m: np.ndarray, tol: float = 1e-10) -> tuple[float, np.ndarray, float]:
    """``(lambda_min, unit eigenvector, residual norm)``.

    Raises :class:`EigenError` if ``||M v - lambda v|| > tol * ||M||_F``.
    """
    m = _check(m)
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0]), np.ones(1), 0.0
    d, e, vecs = _householder_tridiagonal(m.copy())
    dd, ee = d.copy(), e.copy()
    if _tridiagonal_ql(dd, ee) != 0:
        raise EigenError("implicit QL did not converge")
    lam = float(dd.min())
    scale = float(np.abs(d).max() + np.abs(e).max())
    y = _tridiagonal_inverse_iteration(d, e, lam, 3, scale)
    v = _back_transform(vecs, y)
    v /= np.linalg.norm(v)
    res = float(np.linalg.norm(m @ v - lam * v))
    mnorm = float(np.linalg.norm(m))
    if res > tol * max(mnorm, 1.0):
        raise EigenError(f"eigenpair residual {res:.3e} above tolerance")
    return lam, v, res


def dense_smallest_eigen(m: np.ndarray, tol: float = 1e-10) -> float:
    return dense_smallest_eigenpair(m, tol)[0]
