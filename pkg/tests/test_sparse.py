import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from cliquespan.graph import Graph, generate
from cliquespan.nearest import ball_radius, nearest_neighbors
from cliquespan.partition import classify
from cliquespan.sparse import (
    build_local_views,
    cons_spanner_sparse,
    integer_root_ceil,
    local_spanner_global,
    run_local_spanner,
)
from cliquespan.verify import audit_stretch, pair_distances

from conftest import graphs


def pipeline(g, k):
    nn = nearest_neighbors(g, k)
    part = classify(g, k, nn)
    views = build_local_views(g, part, k, nn)
    return nn, part, views, cons_spanner_sparse(g, part, k, views)


@given(st.integers(1, 10**6), st.integers(1, 12))
def test_integer_root(n, k):
    s = integer_root_ceil(n, k)
    assert s**k >= n and (s == 1 or (s - 1) ** k < n)


def test_single_edge():
    assert local_spanner_global(Graph.from_edges(2, [(0, 1)]), 4) == {(0, 1)}


def test_five_cycle_keeps_everything():
    assert local_spanner_global(generate("cycle", {"n": 5}), 2) == generate("cycle", {"n": 5}).edge_set()


def test_k4_stretch_three():
    g = generate("complete", {"n": 4})
    assert audit_stretch(g, local_spanner_global(g, 2), 3).passed


@given(graphs(min_n=2, max_n=30), st.integers(1, 6))
def test_global_run_stretch(g, k):
    assert audit_stretch(g, local_spanner_global(g, k), 2 * k - 1).passed


def test_view_of_path_center():
    g = Graph.from_edges(40, [(0, 1), (1, 2)])  # large n keeps the path sparse
    nn, part, views, _ = pipeline(g, 6)
    assert {0, 1, 2} <= part.sparse
    assert views[1].edges() == {(0, 1), (1, 2)}


def test_dense_only_graph_has_no_views_or_edges():
    nn, part, views, sp = pipeline(generate("path", {"n": 9}), 6)
    assert views == {} and sp.edges == frozenset()


def test_sparse_tree_is_kept_whole():
    # radius-3 balls hold at most 7 vertices, below the dense count 8 for n=200, k=8
    g = Graph.from_edges(200, [(i, i + 1) for i in range(0, 20)] + [(30, 31), (31, 32), (31, 33)])
    _, part, _, sp = pipeline(g, 8)
    assert part.e_sparse == g.edge_set()
    assert sp.edges == g.edge_set()


def bipartite(n, p, seed):
    rng = np.random.default_rng(seed)
    half = n // 2
    return Graph.from_edges(
        n, [(u, v) for u in range(half) for v in range(half, n) if rng.random() < p]
    )


def test_bipartite_sparse_instance():
    g = bipartite(60, 0.08, 5)
    _, part, _, sp = pipeline(g, 8)
    dist = pair_distances(g.n, sp.edges, part.e_sparse - sp.edges)
    assert max(dist.values(), default=1) <= 5


def view_oracle(g, part, owner, rho):
    """Sparse-region ball around ``owner`` computed centrally."""
    sg = Graph.from_edges(g.n, part.e_sparse)
    from cliquespan.graph import bfs_distances

    d = bfs_distances(sg, owner)
    return {v for v in range(g.n) if 0 <= d[v] <= rho}


@given(graphs(min_n=2, max_n=60, max_p=0.15), st.sampled_from([6, 8, 10]))
def test_local_views_and_fidelity(g, k):
    nn, part, views, sp = pipeline(g, k)
    rho = ball_radius(k)
    ref = run_local_spanner({v: [w for w in g.adj[v] if (min(v, w), max(v, w)) in part.e_sparse] for v in range(g.n)}, g.n, k)
    for u, view in views.items():
        assert view.vertices == view_oracle(g, part, u, rho)
        # every certified decision agrees with the centralized run on the sparse region
        assert set(sp.kept_decisions[u]) <= set(ref.decisions)
        assert sp.inactive_round[u] <= rho
    if rho >= 1:
        dist = pair_distances(g.n, sp.edges, part.e_sparse - sp.edges)
        assert max(dist.values(), default=1) <= 2 * rho - 1
