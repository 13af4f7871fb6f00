"""Brute-force greedy (BFG): grow the pinned set one best node at a time."""
from __future__ import annotations

import numpy as np

from ..graph import Graph, PinningPartition
from ..spectral import grounded_lambda1, solve_levels_batch
from .output import StrategyOutput, StrategyRecord

# quenched values carry solver noise; a candidate must beat the incumbent by
# this relative margin to displace a lower id
TIE_RTOL = 1e-12


def _best_annealed(degrees, levels, inv, free_counts, pinned_sum, pinned_mask):
    # every free node at one level gives the same lambda, so score levels
    cand = np.flatnonzero(free_counts)
    rows = np.tile(free_counts, (len(cand), 1))
    rows[np.arange(len(cand)), cand] -= 1
    ok = rows.any(axis=1)
    lams = np.full(len(cand), -np.inf)
    lams[ok] = solve_levels_batch(levels, rows[ok], pinned_sum + levels[cand[ok]])
    best_levels = cand[lams == lams.max()]
    free_ids = np.flatnonzero(~pinned_mask & np.isin(inv, best_levels))
    return int(free_ids[0])


def select_bfg_curve(g: Graph, c_max: int, backend: str = "quenched") -> StrategyOutput:
    n = g.n_nodes
    if not 1 <= c_max < n:
        raise ValueError(f"c_max={c_max} must satisfy 1 <= c_max < N={n}")
    out = StrategyOutput("BFG")
    degrees = np.asarray(g.degrees)
    levels, inv = np.unique(degrees, return_inverse=True)
    free_counts = np.bincount(inv, minlength=len(levels))
    pinned_mask = np.zeros(n, dtype=bool)
    pinned_sum = 0.0
    for c in range(1, c_max + 1):
        if backend == "annealed":
            node = _best_annealed(degrees, levels, inv, free_counts, pinned_sum, pinned_mask)
        else:
            base = np.flatnonzero(pinned_mask).tolist()
            best, node = -np.inf, -1
            for v in np.flatnonzero(~pinned_mask):
                lam = grounded_lambda1(g, base + [int(v)], backend).lambda1
                if lam > best * (1.0 + TIE_RTOL):
                    best, node = lam, int(v)
        pinned_mask[node] = True
        free_counts[inv[node]] -= 1
        pinned_sum += float(degrees[node])
        p = PinningPartition.from_nodes(np.flatnonzero(pinned_mask).tolist(), n)
        out.records.append(StrategyRecord(c, p, grounded_lambda1(g, p.pinned, backend)))
    return out
