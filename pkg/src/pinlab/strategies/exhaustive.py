"""Exact optimum by enumerating every pinned set of a given size."""
from __future__ import annotations

import itertools
import math

import numpy as np

from ..graph import Graph, PinningPartition
from ..spectral import SpectralResult, grounded_lambda1, solve_levels, solve_levels_batch

ENUMERATION_CAP = 10_000_000
_CHUNK = 1 << 15
TIE_RTOL = 1e-12  # quenched only; annealed values are compared exactly


def _combo_chunks(n: int, c: int):
    it = itertools.combinations(range(n), c)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, _CHUNK)),
                            dtype=np.int64)
        if not len(block):
            return
        yield block.reshape(-1, c)


def exhaustive_annealed(degrees: np.ndarray, c: int):
    """Annealed optimum over all c-subsets of a degree vector: ``(best ids, result)``."""
    levels, inv = np.unique(degrees, return_inverse=True)
    total_counts = np.bincount(inv, minlength=len(levels))
    dmin = levels[0]
    n_min = int(total_counts[0])
    best_lam, best_set = -np.inf, None
    for combos in _combo_chunks(len(degrees), c):
        lvl = np.sort(inv[combos], axis=1)
        if best_lam > dmin:
            # a free minimum-degree node caps lambda below dmin: skip those sets
            keep = (lvl == 0).sum(axis=1) == n_min
            combos, lvl = combos[keep], lvl[keep]
            if not len(combos):
                continue
        # lambda depends only on the pinned degree multiset: solve each once
        keys, first, back = np.unique(lvl, axis=0, return_index=True, return_inverse=True)
        counts = np.tile(total_counts, (len(keys), 1))
        np.subtract.at(counts, (np.repeat(np.arange(len(keys)), c), keys.ravel()), 1)
        lams = solve_levels_batch(levels, counts, (levels[keys]).sum(axis=1))[back.ravel()]
        i = int(np.argmax(lams))
        if lams[i] > best_lam:
            best_lam, best_set = float(lams[i]), combos[i]
    mask = np.ones(len(degrees), dtype=bool)
    mask[best_set] = False
    free = np.unique(degrees[mask], return_counts=True)
    lam, it, res = solve_levels(free[0], free[1], float(degrees[best_set].sum()))
    return best_set, SpectralResult(lam, "annealed", it, abs(res), float(free[0][0]))


def select_exhaustive(g: Graph, c: int, backend: str = "annealed",
                      cap: int = ENUMERATION_CAP) -> tuple[PinningPartition, SpectralResult]:
    """Global maximiser of lambda over all ``c``-subsets; ties go to the lexicographically smallest set."""
    n = g.n_nodes
    if not 1 <= c < n:
        raise ValueError(f"budget c={c} must satisfy 1 <= c < N={n}")
    total = math.comb(n, c)
    if total > cap:
        raise ValueError(f"C({n},{c}) = {total} subsets exceeds the enumeration cap {cap}; "
                         "use the A2 threshold selector instead")
    if backend == "annealed":
        best, res = exhaustive_annealed(np.asarray(g.degrees), c)
    else:
        best, res = None, None
        for combo in itertools.combinations(range(n), c):
            r = grounded_lambda1(g, combo, backend)
            if res is None or r.lambda1 > res.lambda1 * (1.0 + TIE_RTOL):
                best, res = combo, r
    return PinningPartition.from_nodes(np.asarray(best).tolist(), n), res


def exhaustive_curve(g: Graph, c_max: int, backend: str = "annealed"):
    from .output import StrategyOutput, StrategyRecord
    out = StrategyOutput("EXH")
    for c in range(1, c_max + 1):
        p, r = select_exhaustive(g, c, backend)
        out.records.append(StrategyRecord(c, p, r))
    return out
