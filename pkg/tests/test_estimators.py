import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from pinlab import (CentralityPinning, ExhaustivePinning, GreedyPinning, ThresholdPinning,
                    make_estimator)
from pinlab.degree_model import DegreeDistribution, connect_or_regenerate
from pinlab.estimators import STRATEGIES
from pinlab.graph import Graph
from pinlab.validation import check_degrees, check_fraction, check_graph, resolve_c_max


@pytest.fixture(scope="module")
def g100():
    g, _ = connect_or_regenerate(DegreeDistribution.for_size(100, k_sat=20), 100, 3)
    return g


def test_fit_transform_shape(g100):
    est = ThresholdPinning("A2", p_max=0.3)
    x = est.fit_transform(g100)
    c_max = int(0.3 * g100.n_nodes)
    assert x.shape == (c_max, g100.n_nodes)
    assert x.dtype == np.int8
    assert x.sum(axis=1).tolist() == list(range(1, c_max + 1))
    assert len(est.k_star_) == c_max and len(est.lambda1_) == c_max


def test_params_roundtrip_and_clone():
    est = CentralityPinning(measure="BC", p_max=0.1, c_max=4, backend="quenched")
    assert est.get_params() == {"measure": "BC", "p_max": 0.1, "c_max": 4, "backend": "quenched"}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(measure="CC")
    assert est.measure == "CC"


def test_unfitted_raises(g100):
    with pytest.raises(NotFittedError):
        ThresholdPinning().transform(g100)


def test_transform_rejects_other_size(g100, triangle):
    est = ThresholdPinning(c_max=2).fit(g100)
    with pytest.raises(ValueError):
        est.transform(triangle)


def test_accepts_edge_array_and_adjacency():
    edges = np.array([[0, 1], [1, 2], [2, 3]])
    by_graph = ThresholdPinning(c_max=1).fit(Graph.from_edges(4, edges)).pinned_sets_
    by_edges = ThresholdPinning(c_max=1).fit(edges).pinned_sets_
    adj = np.array([[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]])
    by_adj = ThresholdPinning(c_max=1).fit(adj).pinned_sets_
    assert by_graph == by_edges == by_adj


def test_score_is_negative_efficiency(g100):
    est = ThresholdPinning(c_max=10).fit(g100)
    curve = est.curve()
    assert est.score(g100) == pytest.approx(-np.mean([p.inv_lambda1 for p in curve.points]))


def test_a2_scores_at_least_degree_baseline(g100):
    a2 = ThresholdPinning("A2", c_max=20).fit(g100)
    dc = CentralityPinning("DC", c_max=20).fit(g100)
    assert a2.score(g100) >= dc.score(g100)


def test_bad_parameters_surface_at_fit(g100):
    with pytest.raises(ValueError):
        ThresholdPinning("A3").fit(g100)
    with pytest.raises(ValueError):
        CentralityPinning("PR").fit(g100)
    with pytest.raises(ValueError):
        GreedyPinning(backend="exact").fit(g100)


def test_make_estimator_covers_all_tags(path3):
    for tag in STRATEGIES:
        est = make_estimator(tag, c_max=1)
        est.fit(path3)
        assert est.output_.strategy in (tag, "EXH")
    with pytest.raises(ValueError):
        make_estimator("XYZ")


def test_exhaustive_estimator_on_small_graph():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 3)])
    exh = ExhaustivePinning(c_max=3).fit(g)
    a2 = ThresholdPinning(c_max=3).fit(g)
    assert np.all(exh.lambda1_ >= a2.lambda1_ - 1e-12)


def test_validation_helpers():
    with pytest.raises(ValueError):
        check_graph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        check_graph(np.array([[1, 1], [1, 0]]))
    with pytest.raises(ValueError):
        check_graph(np.zeros(3))
    assert check_degrees([1.0, 2.0]).dtype == np.int64
    with pytest.raises(ValueError):
        check_degrees([0, 1])
    with pytest.raises(ValueError):
        check_fraction(0)
    assert resolve_c_max(100, 0.3) == 30
    assert resolve_c_max(100, 0.3, 5) == 5
    with pytest.raises(ValueError):
        resolve_c_max(3, 0.3)
    with pytest.raises(ValueError):
        resolve_c_max(10, 0.3, 10)
