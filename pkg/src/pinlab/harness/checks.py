"""Randomized checks of the structural claims behind the threshold selectors.

Every suite draws degree vectors from :func:`random_degrees`, works purely on
the annealed model and returns a :class:`CheckReport` listing counterexamples.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..degree_model import make_rng
from ..graph import degree_histogram
from ..spectral import lambda1_for_pinned
from ..strategies import select_a2_curve, threshold_lambda
from ..strategies.exhaustive import exhaustive_annealed

SWITCH_TOL = 1e-9
OPTIMALITY_TOL = 1e-9


@dataclass
class CheckReport:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return self.trials - len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        return f"{self.name}: {self.passed}/{self.trials} passed"


def random_degrees(rng, n_min: int = 3, n_max: int = 16, max_levels: int = 6) -> np.ndarray:
    """Degree vector with a few repeated levels, entries in ``1..N-1``."""
    n = int(rng.integers(n_min, n_max + 1))
    q = int(rng.integers(1, min(max_levels, n - 1) + 1))
    levels = np.sort(rng.choice(np.arange(1, n), size=q, replace=False))
    counts = 1 + rng.multinomial(n - q, np.full(q, 1.0 / q))
    return np.repeat(levels, counts).astype(np.int64)


def _lam(d, pinned) -> float:
    return lambda1_for_pinned(d, pinned).lambda1


def check_a2_optimality(trials: int = 200, n_max: int = 16, c_max: int = 5, seed: int = 0) -> CheckReport:
    """A2's value equals the exhaustive optimum for every ``c <= c_max``."""
    rng = make_rng(seed)
    rep = CheckReport("A2 equals exhaustive optimum")
    for _ in range(trials):
        d = random_degrees(rng, max(3, min(c_max + 1, n_max)), n_max)
        top = min(c_max, len(d) - 1)
        curve = select_a2_curve(degree_histogram(d), top)
        for rec in curve:
            rep.trials += 1
            best, res = exhaustive_annealed(d, rec.c)
            if abs(res.lambda1 - rec.lambda1) > OPTIMALITY_TOL:
                rep.failures.append({"degrees": d.tolist(), "c": rec.c, "a2": rec.lambda1,
                                     "a2_set": sorted(rec.partition.pinned), "optimum": res.lambda1,
                                     "optimal_set": best.tolist()})
    return rep


def check_swap(trials: int = 1000, n_max: int = 40, seed: int = 1) -> CheckReport:
    """Pinning a higher-degree free node in place of a pinned one raises lambda.

    Hypotheses: ``d_f > d_p >= min d_F`` and removing ``f`` keeps ``min d_F``.
    """
    rng = make_rng(seed)
    rep = CheckReport("swap raises lambda")
    while rep.trials < trials:
        d = random_degrees(rng, 4, n_max)
        n = len(d)
        c = int(rng.integers(1, n - 1))
        pinned = rng.choice(n, size=c, replace=False)
        free = np.setdiff1d(np.arange(n), pinned)
        dmin = d[free].min()
        pairs = [(p, f) for p in pinned for f in free if d[f] > d[p] >= dmin]
        if not pairs:
            continue
        p, f = pairs[int(rng.integers(len(pairs)))]
        rest = free[free != f]
        if d[rest].min() != dmin:
            continue
        before = _lam(d, pinned)
        after = _lam(d, np.append(pinned[pinned != p], f))
        rep.trials += 1
        if not after > before:
            rep.failures.append({"degrees": d.tolist(), "pinned": sorted(pinned.tolist()),
                                 "p": int(p), "f": int(f), "before": before, "after": after})
    return rep


def check_single_addition(trials: int = 1000, n_max: int = 40, seed: int = 2) -> CheckReport:
    """Pinning one more free node, without changing ``min d_F``, raises lambda."""
    rng = make_rng(seed)
    rep = CheckReport("single addition raises lambda")
    while rep.trials < trials:
        d = random_degrees(rng, 4, n_max)
        n = len(d)
        c = int(rng.integers(1, n - 1))
        pinned = rng.choice(n, size=c, replace=False)
        free = np.setdiff1d(np.arange(n), pinned)
        dmin = d[free].min()
        ok = [f for f in free if d[np.setdiff1d(free, [f])].min() == dmin]
        if not ok:
            continue
        f = ok[int(rng.integers(len(ok)))]
        before = _lam(d, pinned)
        after = _lam(d, np.append(pinned, f))
        rep.trials += 1
        if not after > before:
            rep.failures.append({"degrees": d.tolist(), "pinned": sorted(pinned.tolist()),
                                 "f": int(f), "before": before, "after": after})
    return rep


def check_layer_switch(trials: int = 500, n_max: int = 40, seed: int = 3) -> CheckReport:
    """Layer-inclusive threshold ``k`` beats ``k - 1`` iff its lambda reaches level ``k``.

    Half the instances use the first boundary (``gamma_1 <= c < alpha(2)``),
    the others a random ``k`` with ``alpha(k) < c < N``.
    """
    rng = make_rng(seed)
    rep = CheckReport("layer candidate wins iff lambda_b >= d_k")
    while rep.trials < trials:
        d = random_degrees(rng, 4, n_max)
        hist = degree_histogram(d)
        n = len(d)
        if hist.n_levels < 2:
            continue
        if rng.random() < 0.5:
            k = 1
            lo, hi = int(hist.alpha[1]), int(min(hist.alpha[2], n))
        else:
            k = int(rng.integers(1, hist.n_levels + 1))
            lo, hi = int(hist.alpha[k]) + 1, n
        if lo >= hi:
            continue
        c = int(rng.integers(lo, hi))
        lam_a = threshold_lambda(hist, k - 1, c).lambda1
        lam_b = threshold_lambda(hist, k, c).lambda1
        level = float(hist.levels[k - 1])
        wins = lam_b > lam_a
        rep.trials += 1
        if wins != (lam_b >= level - SWITCH_TOL):
            rep.failures.append({"degrees": d.tolist(), "k": k, "c": c, "d_k": level,
                                 "lambda_a": lam_a, "lambda_b": lam_b})
    return rep


def check_regular_closed_form(cases: int = 10_000, n_max: int = 100, seed: int = 4) -> CheckReport:
    """Constant degree ``d``: lambda equals ``c d / N``."""
    rng = make_rng(seed)
    rep = CheckReport("regular closed form")
    tol = 1e-12
    for _ in range(cases):
        n = int(rng.integers(2, n_max + 1))
        deg = int(rng.integers(1, n))
        c = int(rng.integers(1, n))
        d = np.full(n, deg)
        lam = _lam(d, np.arange(c))
        rep.trials += 1
        if abs(lam - c * deg / n) > tol:
            rep.failures.append({"N": n, "d": deg, "c": c, "lambda": lam, "expected": c * deg / n})
    return rep
