"""Centrality rankings used as top-k baselines: degree, betweenness, coreness, cycle ratio."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from ..graph import Graph, PinningPartition

CYCLE_RATIO_MAX_NODES = 10_000
MEASURES = ("DC", "BC", "CC", "CR")


@dataclass(frozen=True)
class CentralityRanking:
    scores: np.ndarray
    order: np.ndarray
    measure: str

    @classmethod
    def from_scores(cls, scores, measure: str) -> "CentralityRanking":
        scores = np.asarray(scores, dtype=float)
        order = np.lexsort((np.arange(len(scores)), -scores))
        return cls(scores, order, measure)


def top_k_set(ranking: CentralityRanking, c: int) -> PinningPartition:
    n = len(ranking.order)
    if not 1 <= c < n:
        raise ValueError(f"budget c={c} must satisfy 1 <= c < N={n}")
    return PinningPartition.from_nodes(ranking.order[:c].tolist(), n)


def rank_degree(g: Graph) -> CentralityRanking:
    return CentralityRanking.from_scores(g.degrees, "DC")


@numba.njit(cache=True)
def _brandes(indptr, indices, n):
    bc = np.zeros(n)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n)
    delta = np.empty(n)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head, tail = 0, 1
        while head < tail:
            v = order[head]
            head += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for q in range(tail - 1, 0, -1):
            w = order[q]
            for p in range(indptr[w], indptr[w + 1]):
                v = indices[p]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            bc[w] += delta[w]
    return bc


def betweenness(g: Graph) -> np.ndarray:
    """Unnormalized shortest-path betweenness; each unordered pair counted once."""
    indptr, indices = g.csr
    return _brandes(indptr, indices, g.n_nodes) / 2.0


def rank_betweenness(g: Graph) -> CentralityRanking:
    return CentralityRanking.from_scores(betweenness(g), "BC")


@numba.njit(cache=True)
def _core_numbers(indptr, indices, deg):
    # bucket peeling (Batagelj-Zaversnik)
    n = deg.shape[0]
    d = deg.copy()
    maxd = 0
    for v in range(n):
        maxd = max(maxd, d[v])
    bin_ = np.zeros(maxd + 2, dtype=np.int64)
    for v in range(n):
        bin_[d[v]] += 1
    start = 0
    for k in range(maxd + 1):
        num = bin_[k]
        bin_[k] = start
        start += num
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    for v in range(n):
        pos[v] = bin_[d[v]]
        vert[pos[v]] = v
        bin_[d[v]] += 1
    for k in range(maxd, 0, -1):
        bin_[k] = bin_[k - 1]
    bin_[0] = 0
    for i in range(n):
        v = vert[i]
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if d[u] > d[v]:
                du = d[u]
                pu = pos[u]
                pw = bin_[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_[du] += 1
                d[u] -= 1
    return d


def coreness(g: Graph) -> np.ndarray:
    indptr, indices = g.csr
    return _core_numbers(indptr, indices, g.degrees.astype(np.int64))


def rank_coreness(g: Graph) -> CentralityRanking:
    return CentralityRanking.from_scores(coreness(g), "CC")


@numba.njit(cache=True)
def _shortest_cycle_through(indptr, indices, j, dist, branch, queue):
    """BFS from ``j`` labelling each node with the neighbour of ``j`` it descends from.

    A shortest cycle through ``j`` closes along an edge joining two different
    branches; its length is dist(u) + dist(v) + 1. Returns 0 if none exists.
    """
    n = dist.shape[0]
    for v in range(n):
        dist[v] = -1
        branch[v] = -1
    dist[j] = 0
    head, tail = 0, 0
    for p in range(indptr[j], indptr[j + 1]):
        w = indices[p]
        dist[w] = 1
        branch[w] = w
        queue[tail] = w
        tail += 1
    best = 0
    while head < tail:
        v = queue[head]
        head += 1
        if best and 2 * dist[v] + 1 > best:
            break
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if w == j:
                continue
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                branch[w] = branch[v]
                queue[tail] = w
                tail += 1
            elif branch[w] != branch[v]:
                length = dist[v] + dist[w] + 1
                if best == 0 or length < best:
                    best = length
    return best


@numba.njit(cache=True)
def _cycle_ratio(indptr, indices, n):
    dist = np.empty(n, dtype=np.int64)
    branch = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    on_path = np.zeros(n, dtype=np.bool_)
    cnt = np.zeros(n)
    ratio = np.zeros(n)
    path = np.empty(n + 1, dtype=np.int64)
    ptr = np.empty(n + 1, dtype=np.int64)
    for j in range(n):
        length = _shortest_cycle_through(indptr, indices, j, dist, branch, queue)
        if length == 0:
            continue
        # enumerate simple closed walks j -> ... -> j of exactly `length` edges;
        # pruning: a node at depth t must satisfy dist <= length - t
        touched = np.zeros(n, dtype=np.bool_)
        total = 0.0
        path[0] = j
        ptr[0] = indptr[j]
        on_path[j] = True
        depth = 0
        while depth >= 0:
            v = path[depth]
            if ptr[depth] == indptr[v + 1]:
                on_path[v] = False
                depth -= 1
                continue
            w = indices[ptr[depth]]
            ptr[depth] += 1
            t = depth + 1
            if w == j:
                # count each cycle once: first hop id < last hop id
                if t == length and path[1] < path[depth]:
                    total += 1.0
                    for q in range(1, t):
                        cnt[path[q]] += 1.0
                        touched[path[q]] = True
                continue
            if t >= length or on_path[w] or dist[w] > length - t:
                continue
            path[t] = w
            ptr[t] = indptr[w]
            on_path[w] = True
            depth = t
        on_path[j] = False
        if total > 0:
            ratio[j] += 1.0
            for i in range(n):
                if touched[i]:
                    ratio[i] += cnt[i] / total
                    cnt[i] = 0.0
    return ratio


def cycle_ratio(g: Graph) -> np.ndarray:
    """``r_i = sum_j c_ij / c_jj`` over the shortest cycles through each node ``j``.

    ``S_j`` is the set of all shortest cycles through ``j``, ``c_ij`` the number
    of them containing ``i`` and ``c_jj = |S_j|``. Nodes on no cycle score 0.
    """
    if g.n_nodes > CYCLE_RATIO_MAX_NODES:
        raise ValueError(f"cycle ratio is limited to {CYCLE_RATIO_MAX_NODES} nodes, got {g.n_nodes}")
    indptr, indices = g.csr
    return _cycle_ratio(indptr, indices, g.n_nodes)


def rank_cycle_ratio(g: Graph) -> CentralityRanking:
    return CentralityRanking.from_scores(cycle_ratio(g), "CR")


RANKERS = {"DC": rank_degree, "BC": rank_betweenness, "CC": rank_coreness, "CR": rank_cycle_ratio}
