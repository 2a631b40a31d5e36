import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquespan.clique import Clique
from cliquespan.errors import InputError, UnsupportedK
from cliquespan.graph import Graph, bfs_truncated, generate
from cliquespan.nearest import (
    ball_radius,
    capacity,
    closed_form_phases,
    dense_count,
    exceeds_threshold,
    gamma_schedule,
    is_heavy,
    nearest_neighbors,
)

from conftest import graphs


@pytest.mark.parametrize("n,k,expect", [(9, 6, 3), (4, 2, 1), (10000, 10, 40), (1024, 6, 11), (5, 6, 2)])
def test_capacity_values(n, k, expect):
    assert capacity(n, k) == expect


@given(st.integers(2, 5000), st.integers(3, 40))
def test_capacity_is_exact_ceiling(n, k):
    c = capacity(n, k)
    assert c ** (2 * k) >= n ** (k - 2)
    assert c == 1 or (c - 1) ** (2 * k) < n ** (k - 2)
    assert abs(c - math.ceil(n ** (0.5 - 1 / k))) <= 1  # float may misround at exact powers
    dc = dense_count(n, k)
    assert dc in (c, c + 1) and exceeds_threshold(dc, n, k) and not exceeds_threshold(dc - 1, n, k)


def test_capacity_domain():
    with pytest.raises(InputError):
        capacity(1, 6)


def test_heaviness_is_exact():
    assert is_heavy(3, 9) and not is_heavy(2, 9) and is_heavy(4, 9)


@pytest.mark.parametrize(
    "k,values", [(8, (2, 3, 4)), (6, (2, 3)), (12, (2, 3, 5, 6)), (16, (2, 3, 5, 8)), (7, (2, 3))]
)
def test_gamma_schedule(k, values):
    assert gamma_schedule(k).values == values


def test_schedule_rejects_small_k():
    with pytest.raises(UnsupportedK):
        gamma_schedule(5)


@given(st.integers(6, 400))
def test_phase_count_closed_form(k):
    expect = min(i for i in range(1, 64) if 2 ** (i - 1) + 1 >= k // 2)
    assert closed_form_phases(k) == expect == len(gamma_schedule(k))


def test_sixteen_has_four_phases():
    g = generate("cycle", {"n": 40})
    assert nearest_neighbors(g, 16).phases == 4 == closed_form_phases(16)


def test_ball_radius():
    assert [ball_radius(k) for k in (6, 7, 8, 9, 10)] == [2, 3, 3, 4, 4]


def test_path_ball():
    nn = nearest_neighbors(generate("path", {"n": 9}), 6)
    assert nn.capacity == 3
    assert nn.trees[4].vertex_set() == {3, 4, 5}


def test_cycle_ball():
    nn = nearest_neighbors(generate("cycle", {"n": 5}), 6)
    assert nn.capacity == 2 and nn.trees[0].vertex_set() == {0, 1}


def test_full_ball_is_stable_after_first_phase():
    nn = nearest_neighbors(generate("grid", {"rows": 6, "cols": 6}), 8)
    full = [v for v, size in nn.history[0].items() if size >= dense_count(36, 8)]
    assert full
    for v in full:
        assert all(h[v] == nn.history[0][v] for h in nn.history)


def test_heavy_vertices_have_no_tree():
    nn = nearest_neighbors(generate("star", {"n": 10}), 6)
    assert nn.heavy == {0} and 0 not in nn.trees


def check_against_oracle(g: Graph, k: int) -> None:
    nn = nearest_neighbors(g, k)
    light = set(range(g.n)) - nn.heavy
    full = dense_count(max(g.n, 2), k)
    for v in sorted(light):
        got = nn.trees[v]
        want = bfs_truncated(g, v, nn.radius, nn.capacity, allowed=light.__contains__)
        assert got.members == want.members, v
        ball = bfs_truncated(g, v, nn.radius, full, allowed=light.__contains__)
        assert (v in nn.exceeds) == (len(ball) >= full)


@given(graphs(min_n=2, max_n=40, max_p=0.4), st.sampled_from([6, 7, 8, 10, 12]))
def test_trees_match_truncated_bfs(g, k):
    check_against_oracle(g, k)


def test_budget_clean_on_random_graph():
    g = generate("gnp", {"n": 150, "p": 0.05}, rng_seed=1)
    cq = Clique(150)
    nearest_neighbors(g, 10, cq)
    assert not cq.ledger.violations and cq.ledger.max_routing_load <= 150
