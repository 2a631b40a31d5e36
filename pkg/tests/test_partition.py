from hypothesis import given
from hypothesis import strategies as st
import pytest

from cliquespan.errors import InputError
from cliquespan.graph import Graph, generate
from cliquespan.nearest import nearest_neighbors
from cliquespan.partition import classify

from conftest import graphs


def part_of(g, k=6):
    return classify(g, k, nearest_neighbors(g, k))


def test_star_is_all_dense():
    p = part_of(generate("star", {"n": 5}))
    assert p.heavy == {0} and p.dense == set(range(5)) and not p.sparse and not p.e_sparse


def test_nine_path_all_dense():
    p = part_of(generate("path", {"n": 9}))
    assert not p.heavy and p.dense == set(range(9)) and not p.e_sparse


def test_two_edges_all_dense():
    p = part_of(Graph.from_edges(4, [(0, 1), (2, 3)]))
    assert p.dense == set(range(4))


def test_isolated_vertices_are_sparse():
    p = part_of(Graph.from_edges(6, [(0, 1)]))
    assert {2, 3, 4, 5} <= p.sparse


def test_mismatched_trees_rejected():
    g = generate("path", {"n": 9})
    with pytest.raises(InputError):
        classify(g, 8, nearest_neighbors(g, 6))


@given(graphs(min_n=2, max_n=60, max_p=0.3), st.sampled_from([6, 8, 9]))
def test_partition_invariants(g, k):
    nn = nearest_neighbors(g, k)
    p = classify(g, k, nn)
    assert p.dense | p.sparse == set(range(g.n)) and not p.dense & p.sparse
    assert p.e_dense | p.e_sparse == g.edge_set() and not p.e_dense & p.e_sparse
    assert p.heavy <= p.dense
    for v in p.sparse:
        assert not any(w in p.heavy for w in g.adj[v])
        assert v not in nn.exceeds
    # Sparse edges are exactly the light-graph edges touching a sparse vertex.
    light_edges = nn.light_graph.edge_set()
    assert p.e_sparse == {e for e in light_edges if e[0] in p.sparse or e[1] in p.sparse}
