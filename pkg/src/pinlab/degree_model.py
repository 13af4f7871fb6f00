"""Saturated, truncated power-law degrees and uniform configuration-model graphs.

Every random draw goes through :func:`make_rng`, a Philox-4x64 counter-based
generator keyed by a 64-bit seed, so sequences and graphs are pure functions
of ``(inputs, seed)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx
import numba
import numpy as np

from .graph import Graph, connected_components, largest_connected_component


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class DegreeDistribution:
    """``p_k = a (k + k_sat)^-gamma exp(-k / k_cut)`` on ``k_min..k_max``."""

    gamma: float = 1.5
    k_sat: float = 0.0
    k_cut: float = math.inf
    k_min: int = 1
    k_max: int = 100

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.k_sat < 0:
            raise ValueError("k_sat must be nonnegative")
        if not self.k_cut > 0:
            raise ValueError("k_cut must be positive (use inf for no cutoff)")
        if not 1 <= self.k_min <= self.k_max:
            raise ValueError("support must satisfy 1 <= k_min <= k_max")

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def _log_weights(self) -> np.ndarray:
        k = self.support.astype(float)
        logw = -self.gamma * np.log(k + self.k_sat)
        if math.isfinite(self.k_cut):
            logw -= k / self.k_cut
        return logw

    def probabilities(self) -> np.ndarray:
        logw = self._log_weights()
        w = np.exp(logw - logw.max())
        return w / w.sum()

    @property
    def normalization(self) -> float:
        """The constant ``a`` making the pmf sum to one over the support."""
        return 1.0 / float(np.exp(self._log_weights()).sum())

    def cdf(self) -> np.ndarray:
        c = np.cumsum(self.probabilities())
        c[-1] = 1.0
        return c

    def with_support(self, k_min: Optional[int] = None, k_max: Optional[int] = None) -> "DegreeDistribution":
        return DegreeDistribution(self.gamma, self.k_sat, self.k_cut,
                                  self.k_min if k_min is None else k_min,
                                  self.k_max if k_max is None else k_max)

    @classmethod
    def for_size(cls, n_nodes: int, gamma=1.5, k_sat=0.0, k_cut=math.inf, k_min=1, k_max=None):
        """Support ``k_min..N//2`` unless ``k_max`` is given.

        With heavy tails (gamma < 2) the full range ``1..N-1`` produces
        dozens of near-complete hubs and almost never a graphical sequence.
        """
        return cls(gamma, k_sat, k_cut, k_min, max(k_min, n_nodes // 2) if k_max is None else k_max)


def pmf(dist: DegreeDistribution, k: int) -> float:
    if not dist.k_min <= k <= dist.k_max:
        raise ValueError(f"degree {k} outside support [{dist.k_min}, {dist.k_max}]")
    return float(dist.probabilities()[k - dist.k_min])


@dataclass(frozen=True)
class SampledSequence:
    degrees: np.ndarray
    seed: int
    parity_fix: Optional[int] = None

    @property
    def total(self) -> int:
        return int(self.degrees.sum())


def sample_degree_sequence(dist: DegreeDistribution, n_nodes: int, seed: int) -> SampledSequence:
    """Draw ``n_nodes`` i.i.d. degrees by inverse CDF; fix odd parity by one increment.

    The incremented node is drawn uniformly among nodes that can still take
    another edge (degree < N-1), falling back to all nodes if none can.
    """
    if n_nodes < 2:
        raise ValueError("need at least two nodes")
    rng = make_rng(seed)
    u = rng.random(n_nodes)
    idx = np.searchsorted(dist.cdf(), u, side="right")
    degrees = dist.support[np.minimum(idx, len(dist.support) - 1)].astype(np.int64)
    fix = None
    if degrees.sum() % 2:
        room = np.flatnonzero(degrees < n_nodes - 1)
        pool = room if len(room) else np.arange(n_nodes)
        fix = int(pool[rng.integers(len(pool))])
        degrees[fix] += 1
    return SampledSequence(degrees, int(seed), fix)


def is_graphical(seq: Sequence[int]) -> bool:
    """Erdos-Gallai test for a simple undirected graph."""
    d = np.sort(np.asarray(seq, dtype=np.int64))[::-1]
    n = len(d)
    if n == 0:
        return True
    if d[-1] < 0 or d.sum() % 2:
        return False
    k = np.arange(1, n + 1)
    lhs = np.cumsum(d)
    # tail_k = sum_{i>k} min(d_i, k); entries >= k sit in the first n_ge slots
    n_ge = n - np.searchsorted(d[::-1], k, side="left")
    suffix = np.concatenate([np.cumsum(d[::-1])[::-1], [0]])
    tail = k * np.maximum(n_ge - k, 0) + suffix[np.maximum(k, n_ge)]
    return bool(np.all(lhs <= k * (k - 1) + tail))


class GenerationError(RuntimeError):
    """Raised when a configuration-model sample cannot be produced."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class UCMStats:
    restarts: int
    repair_swaps: int
    method: str = "stub_matching"


def _violations(pairs: np.ndarray) -> int:
    loops = int(np.count_nonzero(pairs[:, 0] == pairs[:, 1]))
    s = np.sort(pairs, axis=1)
    uniq = np.unique(s, axis=0)
    return loops + (len(s) - len(uniq))


def _repair(pairs: np.ndarray, rng: np.random.Generator, max_swaps: int) -> tuple[np.ndarray, int]:
    edges = [tuple(sorted(map(int, p))) for p in pairs]
    count: dict[tuple, int] = {}
    for e in edges:
        count[e] = count.get(e, 0) + 1
    seen: dict[tuple, int] = {}
    bad = []
    for i, e in enumerate(edges):
        seen[e] = seen.get(e, 0) + 1
        if e[0] == e[1] or seen[e] > 1:
            bad.append(i)
    m = len(edges)
    swaps = attempts = 0
    while bad:
        i = bad[-1]
        e = edges[i]
        if e[0] != e[1] and count[e] == 1:
            bad.pop()
            continue
        attempts += 1
        if attempts > max_swaps:
            raise GenerationError("edge-swap repair did not converge",
                                  {"remaining_violations": len(bad), "swaps": swaps})
        j = int(rng.integers(m))
        if j == i:
            continue
        a, b = e
        c, d = edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        n1, n2 = tuple(sorted((a, c))), tuple(sorted((b, d)))
        if n1[0] == n1[1] or n2[0] == n2[1] or n1 == n2:
            continue
        if count.get(n1, 0) or count.get(n2, 0):
            continue
        for old in (e, edges[j]):
            count[old] -= 1
            if not count[old]:
                del count[old]
        count[n1] = count[n2] = 1
        edges[i], edges[j] = n1, n2
        swaps += 1
        bad.pop()
    return np.array(edges, dtype=np.int64), swaps


@numba.njit(cache=True)
def _swap_chain(u, v, n, picks, flips):
    """Degree-preserving double-edge swaps; ``picks`` and ``flips`` are pre-drawn."""
    keys = set()
    for i in range(len(u)):
        keys.add(u[i] * n + v[i])
    done = 0
    for t in range(len(flips)):
        i, j = picks[t, 0], picks[t, 1]
        if i == j:
            continue
        a, b = u[i], v[i]
        c, d = u[j], v[j]
        if flips[t]:
            c, d = d, c
        if a == c or a == d or b == c or b == d:
            continue
        k1 = min(a, c) * n + max(a, c)
        k2 = min(b, d) * n + max(b, d)
        if k1 in keys or k2 in keys:
            continue
        keys.remove(a * n + b)
        keys.remove(min(c, d) * n + max(c, d))
        keys.add(k1)
        keys.add(k2)
        u[i], v[i] = min(a, c), max(a, c)
        u[j], v[j] = min(b, d), max(b, d)
        done += 1
    return done


def _havel_hakimi_randomized(d: np.ndarray, rng: np.random.Generator, sweeps: int = 100) -> tuple[np.ndarray, int]:
    e = np.array(nx.havel_hakimi_graph(d.tolist()).edges(), dtype=np.int64).reshape(-1, 2)
    e.sort(axis=1)
    u, v = e[:, 0].copy(), e[:, 1].copy()
    attempts = sweeps * len(u)
    picks = rng.integers(len(u), size=(attempts, 2)) if len(u) else np.zeros((0, 2), dtype=np.int64)
    flips = rng.random(attempts) < 0.5
    done = _swap_chain(u, v, len(d), picks, flips)
    return np.column_stack([u, v]), int(done)


def generate_ucm(seq: Sequence[int], seed: int, max_restarts: int = 50, return_stats: bool = False):
    """Simple graph with exactly the degree sequence ``seq``.

    Stub matching with whole-attempt rejection; once ``max_restarts`` attempts
    have failed, the last matching is repaired by random double-edge swaps.
    Sequences close to the graphicality boundary can defeat the repair; those
    start from a Havel-Hakimi realization instead, randomized by a chain of
    degree-preserving swaps. ``return_stats`` reports which route was taken.
    """
    d = np.asarray(seq, dtype=np.int64)
    n = len(d)
    if d.sum() % 2:
        raise ValueError("odd degree sum")
    if n and d.max() >= n:
        raise ValueError(f"max degree {d.max()} >= N={n}: not graphical at this size")
    if not is_graphical(d):
        raise ValueError("degree sequence is not graphical (Erdos-Gallai)")
    rng = make_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    pairs = np.empty((0, 2), dtype=np.int64)
    swaps = 0
    restarts = 0
    method = "stub_matching"
    if len(stubs):
        for restarts in range(max_restarts + 1):
            rng.shuffle(stubs)
            pairs = stubs.reshape(-1, 2)
            if _violations(pairs) == 0:
                break
        else:
            try:
                pairs, swaps = _repair(pairs, rng, max_swaps=200 * len(pairs) + 10_000)
                method = "swap_repair"
            except GenerationError:
                pairs, swaps = _havel_hakimi_randomized(d, rng)
                method = "havel_hakimi"
    g = Graph(n, pairs)
    if not np.array_equal(g.degrees, d):
        raise GenerationError("generated degrees differ from the requested sequence")
    if return_stats:
        return g, UCMStats(restarts, swaps, method)
    return g


@dataclass(frozen=True)
class GenerationInfo:
    sequence: SampledSequence
    seed_used: int
    attempts: int
    restarts: int
    repair_swaps: int
    n_sampled: int
    n_components: int
    method: str = "stub_matching"


def connect_or_regenerate(dist: DegreeDistribution, n_nodes: int, seed: int,
                          policy: str = "take_lcc", max_attempts: int = 20) -> tuple[Graph, GenerationInfo]:
    """Sample a graph that is connected under ``policy``.

    ``retry_new_seed`` moves to seed+1, seed+2, ... until a connected sample
    appears; ``take_lcc`` keeps the largest component of the first
    realizable sample. Non-graphical draws are resampled under both policies.
    """
    if policy not in ("retry_new_seed", "take_lcc"):
        raise ValueError(f"unknown connectivity policy {policy!r}")
    last = {}
    for attempt in range(max_attempts):
        s = seed + attempt
        seq = sample_degree_sequence(dist, n_nodes, s)
        try:
            g, stats = generate_ucm(seq.degrees, s, return_stats=True)
        except ValueError as exc:
            last = {"seed": s, "reason": str(exc)}
            continue
        comps = connected_components(g)
        info = GenerationInfo(seq, s, attempt + 1, stats.restarts, stats.repair_swaps,
                              n_nodes, len(comps), stats.method)
        if len(comps) == 1:
            return g, info
        last = {"seed": s, "n_components": len(comps),
                "largest_component": max(len(c) for c in comps)}
        if policy == "take_lcc":
            lcc, _ = largest_connected_component(g)
            return lcc, info
    raise GenerationError(f"no acceptable graph after {max_attempts} attempts", last)


def write_degree_sequence(seq: Sequence[int], fh) -> None:
    for k in seq:
        fh.write(f"{int(k)}\n")


def read_degree_sequence(fh) -> np.ndarray:
    vals = []
    for lineno, line in enumerate(fh, start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        try:
            vals.append(int(s))
        except ValueError:
            raise ValueError(f"line {lineno}: expected an integer degree, got {s!r}") from None
    return np.array(vals, dtype=np.int64)
