import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pinlab.degree_model import DegreeDistribution, connect_or_regenerate
from pinlab.graph import Graph, degree_histogram, validate_partition
from pinlab.spectral import lambda1_for_pinned, quenched_lambda1
from pinlab.strategies import (CentralityRanking, a1_curve, a1_index, a2_candidates, betweenness,
                               coreness, cycle_ratio, exhaustive_annealed, exhaustive_curve,
                               rank_betweenness, rank_coreness, rank_cycle_ratio, rank_degree,
                               select_a1, select_a2_curve, select_bfg_curve, select_exhaustive,
                               threshold_free_counts, threshold_lambda, top_k_set)
from pinlab.strategies.centrality import CYCLE_RATIO_MAX_NODES

H123 = degree_histogram([1, 2, 3])


def _ucm(n, seed, k_sat=20):
    g, _ = connect_or_regenerate(DegreeDistribution.for_size(n, k_sat=k_sat), n, seed)
    return g


# --- threshold selectors ------------------------------------------------------------------

def test_a1_below_first_layer_pins_the_hub():
    h = degree_histogram([1, 1, 2, 3, 5])
    p = select_a1(h, 1)
    assert p.k_star == 0 and sorted(p.pinned) == [4]


def test_a1_takes_whole_first_layer():
    h = degree_histogram([1, 1, 2, 3, 5])
    p = select_a1(h, 2)
    assert p.k_star == 1 and sorted(p.pinned) == [0, 1]


def test_a1_two_layers_of_123():
    p = select_a1(H123, 2)
    assert a1_index(H123, 2) == 2
    assert p.k_star == 2 and sorted(p.pinned) == [0, 1]


def test_a1_budget_errors():
    with pytest.raises(ValueError):
        select_a1(H123, 3)
    with pytest.raises(ValueError):
        a1_curve(H123, 0)


def test_single_low_node_candidate_value():
    assert threshold_lambda(H123, 1, 1).lambda1 == pytest.approx((17 - math.sqrt(145)) / 12, abs=1e-12)


def test_a2_special_case_first_budget():
    out = select_a2_curve(H123, 2)
    r1, r2 = out.records
    assert sorted(r1.partition.pinned) == [2]
    assert r1.lambda1 == pytest.approx(2 / 3, abs=1e-12)
    assert r1.k_star == 0


def test_a2_second_budget_takes_two_layers():
    r2 = select_a2_curve(H123, 2).records[1]
    assert [threshold_lambda(H123, k, 2).lambda1 for k in (0, 1, 2)] == pytest.approx([5 / 6, 4 / 3, 3 / 2])
    assert r2.k_star == 2
    assert sorted(r2.partition.pinned) == [0, 1]
    assert r2.lambda1 == pytest.approx(1.5, abs=1e-12)


def test_a2_below_first_layer_is_top_c():
    d = [1] * 6 + [2, 3, 4, 5, 7, 9]
    out = select_a2_curve(degree_histogram(d), 5)
    for rec in out:
        assert rec.k_star == 0
        assert sorted(rec.partition.pinned) == sorted(np.argsort(d)[::-1][:rec.c].tolist())


def test_a2_candidates_stay_until_next_layer_fits():
    h = degree_histogram([1, 1, 2, 2, 2, 5, 6])
    assert a2_candidates(h, 0, 1) == [0]
    assert a2_candidates(h, 0, 2) == [0, 1]
    assert a2_candidates(h, 1, 4) == [1]
    assert a2_candidates(h, 1, 5) == [1, 2]


def test_threshold_free_counts_match_explicit_sets():
    d = np.array([1, 1, 2, 2, 3, 5, 5, 8])
    h = degree_histogram(d)
    for k in range(h.n_levels + 1):
        for c in range(int(h.alpha[k]), len(d)):
            if c == 0:
                continue
            counts, s = threshold_free_counts(h, k, c)
            pinned = h.threshold_set(k, c)
            free = np.setdiff1d(np.arange(len(d)), pinned)
            assert s == d[pinned].sum()
            assert counts.tolist() == [int(np.sum(d[free] == lv)) for lv in h.levels]


def test_a2_records_are_valid_partitions():
    g = _ucm(200, 1)
    out = select_a2_curve(degree_histogram(g.degrees), 60)
    for rec in out:
        assert validate_partition(g, rec.partition) == []
        assert rec.partition.budget == rec.c


# --- exhaustive -----------------------------------------------------------------------------

def test_exhaustive_123():
    best, res = exhaustive_annealed(np.array([1, 2, 3]), 1)
    assert best.tolist() == [2] and res.lambda1 == pytest.approx(2 / 3, abs=1e-12)
    assert lambda1_for_pinned([1, 2, 3], [1]).lambda1 == pytest.approx((7 - math.sqrt(13)) / 6, abs=1e-12)
    best, res = exhaustive_annealed(np.array([1, 2, 3]), 2)
    assert best.tolist() == [0, 1] and res.lambda1 == pytest.approx(1.5, abs=1e-12)


def test_exhaustive_matches_plain_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(30):
        d = rng.integers(1, 8, size=int(rng.integers(4, 10)))
        c = int(rng.integers(1, len(d)))
        best, res = exhaustive_annealed(d, c)
        brute = max(lambda1_for_pinned(d, s).lambda1 for s in itertools.combinations(range(len(d)), c))
        assert res.lambda1 == pytest.approx(brute, abs=1e-12)


def test_exhaustive_cap_and_budget(triangle):
    g = Graph.from_edges(30, [(i, i + 1) for i in range(29)])
    with pytest.raises(ValueError, match="enumeration cap"):
        select_exhaustive(g, 10, cap=1000)
    with pytest.raises(ValueError):
        select_exhaustive(triangle, 3)


def test_exhaustive_quenched_path(path3):
    p, res = select_exhaustive(path3, 1, "quenched")
    assert sorted(p.pinned) == [1] and res.lambda1 == pytest.approx(1.0)


def test_exhaustive_curve_lengths(path3):
    assert exhaustive_curve(path3, 2).budgets == [1, 2]


# --- greedy ------------------------------------------------------------------------------------

def test_bfg_path_picks_center(path3):
    rec = select_bfg_curve(path3, 1, "quenched").records[0]
    assert sorted(rec.partition.pinned) == [1]
    assert rec.lambda1 == pytest.approx(1.0)


def test_bfg_triangle_tie_goes_to_node_zero(triangle):
    rec = select_bfg_curve(triangle, 1, "quenched").records[0]
    assert sorted(rec.partition.pinned) == [0]
    assert rec.lambda1 == pytest.approx(1.0)


def test_bfg_sets_are_nested():
    g = _ucm(120, 3)
    for backend in ("annealed", "quenched"):
        sets = select_bfg_curve(g, 15, backend).sets()
        assert all(a < b and len(b - a) == 1 for a, b in zip(sets, sets[1:]))


def test_bfg_annealed_step_is_best_single_addition():
    g = _ucm(80, 4)
    out = select_bfg_curve(g, 4, "annealed")
    prev = set()
    for rec in out:
        cand = [lambda1_for_pinned(g.degrees, sorted(prev | {v})).lambda1
                for v in range(g.n_nodes) if v not in prev]
        assert rec.lambda1 == pytest.approx(max(cand), abs=1e-12)
        prev = set(rec.partition.pinned)


def test_bfg_quenched_step_is_best_single_addition():
    g = _ucm(60, 6)
    rec = select_bfg_curve(g, 1, "quenched").records[0]
    best = max(quenched_lambda1(g, [v]).lambda1 for v in range(g.n_nodes))
    assert rec.lambda1 == pytest.approx(best, rel=1e-10)


# --- centrality rankings ------------------------------------------------------------------------

def test_degree_order():
    r = CentralityRanking.from_scores([1, 3, 2], "DC")
    assert r.order.tolist() == [1, 2, 0]


def test_regular_graph_order_is_by_id():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert rank_degree(g).order.tolist() == [0, 1, 2, 3]


def test_star_hub_first(star4):
    assert rank_degree(star4).order[0] == 0


def test_betweenness_examples(path3, star4, triangle):
    assert betweenness(path3).tolist() == [0.0, 1.0, 0.0]
    assert betweenness(star4)[0] == 3.0
    assert betweenness(triangle).tolist() == [0.0, 0.0, 0.0]


def test_betweenness_matches_networkx():
    g = _ucm(150, 2)
    G = nx.Graph(g.edges.tolist())
    ref = nx.betweenness_centrality(G, normalized=False)
    assert np.allclose(betweenness(g), [ref[i] for i in range(g.n_nodes)])


def test_coreness_examples(triangle):
    tp = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert coreness(tp).tolist() == [2, 2, 2, 1]
    tree = Graph.from_edges(5, [(0, 1), (0, 2), (2, 3), (2, 4)])
    assert coreness(tree).tolist() == [1] * 5
    k4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
    assert coreness(k4).tolist() == [3] * 4


def test_coreness_matches_networkx():
    g = _ucm(300, 8)
    ref = nx.core_number(nx.Graph(g.edges.tolist()))
    assert coreness(g).tolist() == [ref[i] for i in range(g.n_nodes)]


def test_cycle_ratio_examples(triangle):
    assert cycle_ratio(triangle).tolist() == [3.0, 3.0, 3.0]
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert cycle_ratio(c4).tolist() == [4.0, 4.0, 4.0, 4.0]
    tree = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    assert cycle_ratio(tree).tolist() == [0.0] * 4


def _simple_cycles(n, adj):
    found = set()
    for start in range(n):
        stack = [(start, [start])]
        while stack:
            v, path = stack.pop()
            for w in adj[v]:
                if w == start and len(path) >= 3:
                    found.add(tuple(_canon(path)))
                elif w > start and w not in path:
                    stack.append((w, path + [w]))
    return [list(c) for c in found]


def _canon(cycle):
    i = cycle.index(min(cycle))
    c = cycle[i:] + cycle[:i]
    return c if c[1] < c[-1] else [c[0]] + c[1:][::-1]


def _cycle_ratio_brute(g):
    n = g.n_nodes
    adj = [set(g.neighbors(i).tolist()) for i in range(n)]
    cycles = _simple_cycles(n, adj)
    r = np.zeros(n)
    for j in range(n):
        through = [c for c in cycles if j in c]
        if not through:
            continue
        L = min(len(c) for c in through)
        s_j = [c for c in through if len(c) == L]
        for i in range(n):
            cij = sum(i in c for c in s_j)
            if cij:
                r[i] += cij / len(s_j)
    return r


def test_cycle_ratio_matches_brute_force():
    rng = np.random.default_rng(12)
    for _ in range(20):
        n = int(rng.integers(4, 10))
        pairs = list(itertools.combinations(range(n), 2))
        keep = rng.random(len(pairs)) < 0.45
        g = Graph.from_edges(n, [p for p, k in zip(pairs, keep) if k])
        assert np.allclose(cycle_ratio(g), _cycle_ratio_brute(g))


def test_cycle_ratio_size_guard(monkeypatch):
    import pinlab.strategies.centrality as cent
    monkeypatch.setattr(cent, "CYCLE_RATIO_MAX_NODES", 3)
    with pytest.raises(ValueError):
        cent.cycle_ratio(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]))
    assert CYCLE_RATIO_MAX_NODES == 10_000


def test_top_k_set():
    r = CentralityRanking.from_scores([1, 3, 2], "DC")
    assert sorted(top_k_set(r, 2).pinned) == [1, 2]
    assert sorted(top_k_set(r, 1).pinned) == [1]
    assert sorted(top_k_set(r, 2).free) == [0]
    with pytest.raises(ValueError):
        top_k_set(r, 3)


def test_rankers_return_measures(path3):
    assert rank_betweenness(path3).measure == "BC"
    assert rank_coreness(path3).measure == "CC"
    assert rank_cycle_ratio(path3).measure == "CR"


@given(st.lists(st.integers(1, 9), min_size=3, max_size=9), st.data())
@settings(max_examples=60, deadline=None)
def test_a2_never_below_a1(d, data):
    h = degree_histogram(d)
    c_max = data.draw(st.integers(1, len(d) - 1))
    a1 = a1_curve(h, c_max).lambdas
    a2 = select_a2_curve(h, c_max).lambdas
    assert all(y >= x - 1e-12 for x, y in zip(a1, a2))
