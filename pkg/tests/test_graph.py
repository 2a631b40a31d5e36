import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquespan.errors import InputError, ParseError, ResourceError
from cliquespan.graph import (
    Graph,
    all_pairs_distances,
    bfs_distances,
    bfs_truncated,
    canon,
    generate,
    parse_generator,
    read_edge_list,
    write_edge_list,
)

from conftest import brute_distances, graphs


def path(n):
    return generate("path", {"n": n})


def test_path_truncated_by_distance():
    t = bfs_truncated(path(5), 0, 2)
    assert t.dist() == {0: 0, 1: 1, 2: 2}


def test_star_count_cap_breaks_ties_by_id():
    t = bfs_truncated(generate("star", {"n": 5}), 1, 2, max_count=3)
    assert t.dist() == {1: 0, 0: 1, 2: 2}


def test_isolated_root():
    t = bfs_truncated(Graph.from_edges(3, []), 1, 4)
    assert t.vertices() == [1]


def test_bad_root_rejected():
    with pytest.raises(InputError):
        bfs_truncated(path(3), 5, 1)


@given(graphs(max_n=25), st.integers(0, 5), st.integers(1, 30), st.data())
def test_truncated_bfs_matches_sorted_oracle(g, radius, cap, data):
    root = data.draw(st.integers(0, g.n - 1))
    d = brute_distances(g)[root]
    expect = sorted((int(d[v]), v) for v in range(g.n) if d[v] <= radius)[:cap]
    t = bfs_truncated(g, root, radius, cap)
    assert [(dd, v) for v, dd, _ in t.members] == expect
    for v, dv, p in t.members:
        if p is None:
            assert v == root
        else:
            assert g.has_edge(v, p) and t.dist()[p] == dv - 1


def test_five_cycle_distances():
    d = all_pairs_distances(generate("cycle", {"n": 5}))
    assert set(np.unique(d)) <= {0, 1, 2} and d[0, 2] == 2


def test_disconnected_distances_are_infinite():
    d = all_pairs_distances(Graph.from_edges(4, [(0, 1), (2, 3)]))
    assert math.isinf(d[0, 2]) and d[0, 1] == 1


def test_petersen_diameter():
    assert all_pairs_distances(generate("petersen")).max() == 2


def test_distance_limit():
    with pytest.raises(ResourceError):
        all_pairs_distances(path(10), limit=5)


@given(graphs(max_n=20))
def test_apsp_symmetric_and_matches_oracle(g):
    d = all_pairs_distances(g)
    assert np.array_equal(d, d.T) and np.all(np.diag(d) == 0)
    assert np.array_equal(d, np.array(brute_distances(g)))
    for s in range(g.n):
        row = [x if x >= 0 else math.inf for x in bfs_distances(g, s)]
        assert row == list(d[s])


def test_generators():
    assert path(5).m == 4
    assert generate("gnp", {"n": 100, "p": 1.0}, rng_seed=7).m == 4950
    g = generate("gnp", {"n": 200, "p": 0.1}, rng_seed=42)
    sigma = math.sqrt(19900 * 0.1 * 0.9)
    assert abs(g.m - 1990) <= 5 * sigma
    assert generate("grid", {"rows": 3, "cols": 4}).m == 17
    assert generate("barbell", {"clique": 4, "bridge": 2}).m == 6 + 6 + 2  # bridge counts path edges
    assert generate("complete", {"n": 6}).m == 15


def test_gnp_reproducible():
    a = generate("gnp", {"n": 80, "p": 0.2}, rng_seed=3)
    b = generate("gnp", {"n": 80, "p": 0.2}, rng_seed=3)
    c = generate("gnp", {"n": 80, "p": 0.2}, rng_seed=4)
    assert a.edge_set() == b.edge_set() != c.edge_set()


def test_parse_generator():
    assert parse_generator("gnp:200:0.1") == ("gnp", {"n": 200.0, "p": 0.1})
    with pytest.raises(InputError):
        parse_generator("nope:3")
    with pytest.raises(InputError):
        parse_generator("gnp:200")


def test_read_small_file():
    g = read_edge_list("3 2\n0 1\n1 2")
    assert g.n == 3 and g.edge_set() == {(0, 1), (1, 2)}


@pytest.mark.parametrize(
    "text,line",
    [
        ("3 2\n0 1\n0 1", 3),
        ("3 1\n0 0", 2),
        ("3 1\n0 7", 2),
        ("3 1\n0 x", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        read_edge_list(text)
    assert exc.value.line == line


def test_header_count_mismatch():
    with pytest.raises(ParseError):
        read_edge_list("3 2\n0 1")


def test_round_trip_random_file():
    rng = np.random.default_rng(11)
    pairs = set()
    while len(pairs) < 50:
        u, v = rng.integers(0, 30, 2)
        if u != v:
            pairs.add((int(v), int(u)))  # deliberately non-canonical order
    text = "30 50\n" + "\n".join(f"{u} {v}" for u, v in pairs)
    g = read_edge_list(text)
    assert read_edge_list(write_edge_list(g)).edge_set() == {canon(u, v) for u, v in pairs}
    assert write_edge_list(read_edge_list(write_edge_list(g))) == write_edge_list(g)


def test_from_edges_validates():
    with pytest.raises(InputError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(InputError):
        Graph.from_edges(3, [(0, 5)])
    with pytest.raises(InputError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
