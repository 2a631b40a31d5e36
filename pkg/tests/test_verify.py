import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquespan.dense import Clustering
from cliquespan.errors import InputError, ResourceError
from cliquespan.graph import Graph, all_pairs_distances, generate
from cliquespan.verify import audit_clustering, audit_stretch, linear_envelope, polylog_envelope

from conftest import graphs


def test_identity_spanner():
    g = generate("petersen")
    a = audit_stretch(g, g.edges(), 1)
    assert a.max_stretch == 1 and a.passed and a.omitted == {}


def test_cycle_minus_edge():
    g = generate("cycle", {"n": 5})
    a = audit_stretch(g, [e for e in g.edges() if e != (0, 4)], 3)
    assert a.max_stretch == 4 and a.argmax == (0, 4) and not a.passed


def test_star_tree_in_k4():
    g = generate("complete", {"n": 4})
    a = audit_stretch(g, [(0, 1), (0, 2), (0, 3)], 2)
    assert a.max_stretch == 2 and a.passed and a.histogram == {1.0: 3, 2.0: 3}


def test_disconnected_spanner_is_infinite():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert math.isinf(audit_stretch(g, [(0, 1)], 10).max_stretch)


def test_foreign_edge_rejected():
    with pytest.raises(InputError):
        audit_stretch(Graph.from_edges(3, [(0, 1)]), [(1, 2)], 3)


def test_oracle_limit(monkeypatch):
    monkeypatch.setenv("SPANNER_ORACLE_LIMIT", "5")
    with pytest.raises(ResourceError):
        audit_stretch(generate("path", {"n": 9}), [], 1)


@given(graphs(min_n=2, max_n=25), st.integers(0, 2**31))
def test_audit_agrees_with_all_pairs(g, seed):
    rng = np.random.default_rng(seed)
    H = [e for e in g.edges() if rng.random() < 0.6]
    a = audit_stretch(g, H, math.inf)
    d = all_pairs_distances(Graph.from_edges(g.n, H))
    want = max((d[u, v] for u, v in g.edges()), default=0.0)
    assert a.max_stretch == want
    for e in g.edges():
        assert a.stretch(e) == d[e]
        assert a.stretch(e) >= 1


def test_singleton_clustering():
    g = generate("path", {"n": 4})
    assert audit_clustering(g, {v: [v] for v in range(4)}, [], 0).passed


def test_missing_tree_edge_named():
    g = generate("path", {"n": 3})
    cl = Clustering(frozenset({0}), {0: 0, 1: 0, 2: 0}, {0: None, 1: 0, 2: 1}, 2)
    a = audit_clustering(g, cl, [(0, 1)], 2)
    assert not a.passed and "(1, 2)" in a.violation


def test_overlapping_clusters_rejected():
    g = generate("path", {"n": 3})
    a = audit_clustering(g, {0: [0, 1], 2: [1, 2]}, g.edges(), 3)
    assert not a.passed and "1" in a.violation


def test_depth_bound_enforced_on_mappings():
    g = generate("path", {"n": 5})
    assert audit_clustering(g, {0: range(5)}, g.edges(), 4).passed
    a = audit_clustering(g, {0: range(5)}, g.edges(), 3)
    assert not a.passed and a.max_depth == 4


def test_envelopes():
    assert polylog_envelope(100, 2) == pytest.approx(2 * 1000 * math.log(100) ** 2)
    assert linear_envelope(100, 2) == pytest.approx(2000)
