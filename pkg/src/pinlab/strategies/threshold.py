"""Threshold selectors: pin whole low-degree layers, spend the rest on hubs."""
from __future__ import annotations

import numpy as np

from ..graph import DegreeHistogram, PinningPartition
from ..spectral import SpectralResult, solve_levels, solve_levels_batch
from .output import StrategyOutput, StrategyRecord


def _check_budget(hist: DegreeHistogram, c: int) -> None:
    if not 1 <= c < hist.n_nodes:
        raise ValueError(f"budget c={c} must satisfy 1 <= c < N={hist.n_nodes}")


def threshold_free_counts(hist: DegreeHistogram, k: int, c: int) -> tuple[np.ndarray, float]:
    """Free-node counts per level and pinned degree sum for the threshold-``k`` set.

    Works on the histogram alone: levels ``1..k`` are emptied and the
    remaining ``c - alpha[k]`` pins are taken from the top levels down.
    """
    counts = hist.counts.astype(np.int64).copy()
    counts[:k] = 0
    rest = c - int(hist.alpha[k])
    if rest < 0:
        raise ValueError(f"threshold {k} needs {hist.alpha[k]} pins but budget is {c}")
    for q in range(hist.n_levels - 1, k - 1, -1):
        if rest == 0:
            break
        take = min(rest, counts[q])
        counts[q] -= take
        rest -= take
    pinned_sum = float(np.dot(hist.counts - counts, hist.levels))
    return counts, pinned_sum


def threshold_lambda(hist: DegreeHistogram, k: int, c: int) -> SpectralResult:
    counts, s = threshold_free_counts(hist, k, c)
    m = counts > 0
    lam, it, res = solve_levels(hist.levels[m], counts[m], s)
    return SpectralResult(lam, "annealed", it, abs(res), float(hist.levels[m][0]))


def a1_index(hist: DegreeHistogram, c: int) -> int:
    """Largest ``k`` with ``alpha[k] <= c``."""
    return int(np.searchsorted(hist.alpha, c, side="right")) - 1


def select_a1(hist: DegreeHistogram, c: int) -> PinningPartition:
    _check_budget(hist, c)
    k = a1_index(hist, c)
    return PinningPartition.from_nodes(hist.threshold_set(k, c).tolist(), hist.n_nodes, k)


def a1_curve(hist: DegreeHistogram, c_max: int) -> StrategyOutput:
    _check_budget(hist, c_max)
    out = StrategyOutput("A1")
    for c in range(1, c_max + 1):
        p = select_a1(hist, c)
        out.records.append(StrategyRecord(c, p, threshold_lambda(hist, p.k_star, c), p.k_star))
    return out


def a2_candidates(hist: DegreeHistogram, k_prev: int, c: int) -> list[int]:
    """Thresholds examined at budget ``c`` given the previous winner ``k_prev``."""
    if k_prev >= hist.n_levels or c < hist.alpha[k_prev + 1]:
        return [k_prev]
    return list(range(k_prev, a1_index(hist, c) + 1))


def select_a2_curve(hist: DegreeHistogram, c_max: int) -> StrategyOutput:
    """Optimal threshold per budget, updated incrementally from ``c = 1``.

    The threshold stays put while the next layer does not fit. Once it does,
    every threshold from the current one up to the largest affordable one is
    scored and the best annealed value wins, ties going to the larger index.
    """
    _check_budget(hist, c_max)
    out = StrategyOutput("A2")
    k_star = 0
    for c in range(1, c_max + 1):
        cands = a2_candidates(hist, k_star, c)
        if len(cands) == 1:
            k_star = cands[0]
            res = threshold_lambda(hist, k_star, c)
        else:
            rows, sums = zip(*(threshold_free_counts(hist, k, c) for k in cands))
            lams = solve_levels_batch(hist.levels, np.array(rows), np.array(sums))
            best = len(cands) - 1 - int(np.argmax(lams[::-1]))
            k_star = cands[best]
            res = threshold_lambda(hist, k_star, c)
        p = PinningPartition.from_nodes(hist.threshold_set(k_star, c).tolist(), hist.n_nodes, k_star)
        out.records.append(StrategyRecord(c, p, res, k_star))
    return out
