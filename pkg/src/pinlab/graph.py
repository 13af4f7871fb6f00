"""Undirected simple graphs, degree bookkeeping and edge-list ingestion."""
from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class EdgeListError(ValueError):
    """Raised for unreadable edge-list input."""


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on nodes ``0..n_nodes-1``.

    ``edges`` is an ``(M, 2)`` integer array with ``u < v`` in every row,
    sorted lexicographically. ``labels`` maps dense ids back to the ids
    found in the source file, when there was one.
    """

    n_nodes: int
    edges: np.ndarray
    labels: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError("graph needs at least one node")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= self.n_nodes:
                raise ValueError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
            e = np.sort(e, axis=1)
            e = e[np.lexsort((e[:, 1], e[:, 0]))]
            if np.any(np.all(e[1:] == e[:-1], axis=1)):
                raise ValueError("duplicate edges are not allowed")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        return cls(n_nodes, np.array(list(edges), dtype=np.int64).reshape(-1, 2), labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.bincount(self.edges.ravel(), minlength=self.n_nodes).astype(np.int64)
        d.setflags(write=False)
        return d

    @property
    def degree_sum(self) -> int:
        return int(self.degrees.sum())

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` adjacency with sorted neighbour lists."""
        u, v = self.edges[:, 0], self.edges[:, 1]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        indices = dst[order]
        indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        return indptr, indices

    def neighbors(self, node: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[node]:indptr[node + 1]]

    def original_label(self, node: int) -> int:
        return int(self.labels[node]) if self.labels is not None else int(node)

    def induced_subgraph(self, nodes: Sequence[int]) -> "Graph":
        """Subgraph on ``nodes`` (in the given order, which fixes the new ids)."""
        nodes = np.asarray(nodes, dtype=np.int64)
        remap = np.full(self.n_nodes, -1, dtype=np.int64)
        remap[nodes] = np.arange(len(nodes))
        e = remap[self.edges]
        e = e[(e[:, 0] >= 0) & (e[:, 1] >= 0)]
        labels = self.labels[nodes] if self.labels is not None else nodes
        return Graph(len(nodes), e, labels)

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1


@dataclass(frozen=True)
class LoadReport:
    duplicates: int = 0
    self_loops: int = 0
    one_indexed: bool = False
    skipped_headers: int = 0


_SPLIT = re.compile(r"[,\s]+")


def _is_int(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return False
    return True


def load_edge_list(source: Union[str, bytes, io.IOBase], delimiter: Optional[str] = None,
                   one_indexed: Optional[bool] = None) -> tuple[Graph, LoadReport]:
    """Parse a whitespace- or comma-separated edge list.

    Lines starting with ``#`` or ``%`` are comments. Non-numeric lines that
    appear before the first edge are treated as headers and skipped. Node
    ids are remapped to ``0..N-1`` in order of first appearance, so the
    1-indexed flag only matters for reporting.
    """
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw

    pairs = []
    headers = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        tokens = [t for t in (s.split(delimiter) if delimiter else _SPLIT.split(s)) if t]
        try:
            # extra columns (weights, timestamps) are ignored
            a, b = int(tokens[0]), int(tokens[1])
        except (ValueError, IndexError):
            if not pairs and not any(_is_int(t) for t in tokens):
                headers += 1
                continue
            raise EdgeListError(f"line {lineno}: expected two integer node ids, got {line!r}")
        pairs.append((a, b))
    if not pairs:
        raise EdgeListError("edge list is empty")

    raw_ids = np.array(pairs, dtype=np.int64)
    if one_indexed is None:
        one_indexed = int(raw_ids.min()) == 1
    labels, first = [], {}
    for a, b in pairs:
        for x in (a, b):
            if x not in first:
                first[x] = len(labels)
                labels.append(x)
    e = np.array([(first[a], first[b]) for a, b in pairs], dtype=np.int64)

    loops = int(np.count_nonzero(e[:, 0] == e[:, 1]))
    e = np.sort(e[e[:, 0] != e[:, 1]], axis=1)
    uniq = np.unique(e, axis=0) if len(e) else e
    dups = len(e) - len(uniq)
    g = Graph(len(labels), uniq, np.array(labels, dtype=np.int64))
    return g, LoadReport(duplicates=dups, self_loops=loops, one_indexed=bool(one_indexed),
                         skipped_headers=headers)


def write_edge_list(g: Graph, fh, use_labels: bool = False) -> None:
    for u, v in g.edges:
        if use_labels:
            u, v = g.original_label(u), g.original_label(v)
        fh.write(f"{u} {v}\n")


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted node lists, ordered by their smallest node id."""
    n = g.n_nodes
    adj = sparse.coo_matrix((np.ones(g.n_edges), (g.edges[:, 0], g.edges[:, 1])), shape=(n, n))
    _, comp_of = csgraph.connected_components(adj, directed=False)
    # relabel so component order follows the smallest member id
    _, first = np.unique(comp_of, return_index=True)
    order = np.argsort(first)
    comps = [np.flatnonzero(comp_of == c).tolist() for c in order]
    return comps


def largest_connected_component(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on the largest component plus the old->new id map.

    Ties between equally large components go to the one holding the
    smallest original node id.
    """
    comps = connected_components(g)

    def key(c):
        smallest = min(g.original_label(x) for x in c)
        return (-len(c), smallest)

    best = min(comps, key=key)
    if len(best) == g.n_nodes:
        return g, {i: i for i in range(g.n_nodes)}
    mapping = {old: new for new, old in enumerate(best)}
    return g.induced_subgraph(best), mapping


@dataclass(frozen=True)
class DegreeHistogram:
    """Distinct degrees with multiplicities and cumulative counts.

    ``alpha`` has a leading zero, so ``alpha[k]`` is the number of nodes with
    degree at most ``levels[k-1]`` and ``alpha[0] == 0``. ``members[k-1]``
    lists the node ids at degree level ``k`` in ascending order.
    """

    levels: np.ndarray
    counts: np.ndarray
    alpha: np.ndarray
    members: tuple
    degrees: np.ndarray

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def n_nodes(self) -> int:
        return int(self.alpha[-1])

    @cached_property
    def descending_order(self) -> np.ndarray:
        """Node ids by decreasing degree, ties by ascending id."""
        return np.lexsort((np.arange(len(self.degrees)), -self.degrees))

    def threshold_set(self, k: int, c: int) -> np.ndarray:
        """All nodes at levels ``1..k`` plus the ``c - alpha[k]`` highest-degree others."""
        base = int(self.alpha[k])
        if base > c:
            raise ValueError(f"threshold {k} needs {base} pins but budget is {c}")
        low = np.concatenate(self.members[:k]) if k else np.empty(0, dtype=np.int64)
        if c == base:
            return np.sort(low)
        cut = self.levels[k - 1] if k else -1
        order = self.descending_order
        high = order[self.degrees[order] > cut][: c - base]
        return np.sort(np.concatenate([low, high]))


def degree_histogram(degrees: Sequence[int]) -> DegreeHistogram:
    d = np.asarray(degrees, dtype=np.int64)
    if d.size == 0:
        raise ValueError("empty degree vector")
    if d.min() < 1:
        raise ValueError("degree histogram expects all degrees >= 1 (connected graph)")
    levels, inverse, counts = np.unique(d, return_inverse=True, return_counts=True)
    alpha = np.concatenate([[0], np.cumsum(counts)])
    members = tuple(np.flatnonzero(inverse == q) for q in range(len(levels)))
    d = d.copy()
    d.setflags(write=False)
    return DegreeHistogram(levels, counts, alpha, members, d)


@dataclass(frozen=True)
class PinningPartition:
    """Split of the node set into pinned ``P`` and free ``F`` nodes."""

    pinned: frozenset
    n_nodes: int
    k_star: Optional[int] = None

    @classmethod
    def from_nodes(cls, pinned: Iterable[int], n_nodes: int, k_star: Optional[int] = None):
        return cls(frozenset(int(x) for x in pinned), n_nodes, k_star)

    @property
    def budget(self) -> int:
        return len(self.pinned)

    @property
    def free(self) -> frozenset:
        return frozenset(range(self.n_nodes)) - self.pinned

    def pinned_array(self) -> np.ndarray:
        return np.array(sorted(self.pinned), dtype=np.int64)

    def free_array(self) -> np.ndarray:
        mask = np.ones(self.n_nodes, dtype=bool)
        mask[self.pinned_array()] = False
        return np.flatnonzero(mask)


def validate_partition(g: Graph, p: PinningPartition) -> list[str]:
    """Return every invariant violation of ``p`` against ``g`` (empty list if ok)."""
    problems = []
    if p.n_nodes != g.n_nodes:
        problems.append(f"partition is over {p.n_nodes} nodes but graph has {g.n_nodes}")
    bad = [x for x in p.pinned if not 0 <= x < g.n_nodes]
    if bad:
        problems.append(f"pinned ids out of range: {sorted(bad)}")
    if not p.pinned:
        problems.append("F must be grounded by nonempty P")
    if len(p.pinned) >= g.n_nodes:
        problems.append("F empty")
    if p.k_star is not None and not bad and p.pinned and g.degrees.min() >= 1:
        hist = degree_histogram(g.degrees)
        k = p.k_star
        if not 0 <= k <= hist.n_levels or hist.alpha[k] > p.budget:
            problems.append(f"threshold index {k} incompatible with budget {p.budget}")
        else:
            expected = set(hist.threshold_set(k, p.budget).tolist())
            if expected != set(p.pinned):
                problems.append(f"pinned set does not match threshold {k} with highest-degree completion")
    return problems
