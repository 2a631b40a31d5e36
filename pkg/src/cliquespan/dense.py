"""Two-level clustering spanner for the dense region.

Level one clusters every dense vertex around hitting-set centers ``Z1`` with
trees of depth at most ``ball_radius(k)``. Level two re-centers vertices that
touch many level-one clusters on a smaller set ``Z2`` (one extra hop). One
edge per adjacent (level-one, level-two) cluster pair closes the construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .clique import Clique, Message, RelabeledClique
from .errors import HittingSetFailure, InputError
from .graph import Edge, Graph, canon
from .hitting import HitOutcome, HittingSetInstance, solve_hitting
from .nearest import NearestNeighbors, ball_radius, capacity
from .partition import Partition


@dataclass(frozen=True)
class Clustering:
    centers: frozenset[int]
    center_of: dict[int, int]
    parent: dict[int, int | None]  # None exactly for centers
    depth_bound: int

    def tree_edges(self) -> frozenset[Edge]:
        return frozenset(canon(v, p) for v, p in self.parent.items() if p is not None)

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
            if d > len(self.parent):
                raise InputError("cluster parent pointers contain a cycle")
        return d

    def max_depth(self) -> int:
        return max((self.depth(v) for v in self.parent), default=0)

    def members(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {c: [] for c in sorted(self.centers)}
        for v in sorted(self.center_of):
            out[self.center_of[v]].append(v)
        return out


def low_adjacency_threshold(n: int, k: int) -> int:
    """Integer ceiling of n^(1/k) * ln n."""
    return math.ceil(n ** (1.0 / k) * math.log(max(n, 2)))


def adjacent_centers(graph: Graph, clustering: Clustering, v: int) -> dict[int, Edge]:
    """Center -> smallest edge from ``v`` into that cluster."""
    out: dict[int, Edge] = {}
    for x in graph.adj[v]:  # ascending, so the first witness per center is the smallest
        s = clustering.center_of.get(x)
        if s is not None and s not in out:
            out[s] = canon(v, x)
    return out


def _next_hop(tree, target: int) -> int:
    path = tree.path_to(target)  # target ... root
    return path[-2]


def build_first_clustering(
    graph: Graph,
    part: Partition,
    k: int,
    nn: NearestNeighbors,
    backend: str = "random",
    rng_seed: int = 0,
    c: float = 2.0,
    clique: Clique | RelabeledClique | None = None,
    ambient_n: int | None = None,
) -> tuple[Clustering, frozenset[Edge], HitOutcome]:
    clique = clique if clique is not None else Clique(graph.n)
    n_amb = ambient_n or graph.n
    near = part.near_heavy
    sets: dict[int, list[int]] = {}
    for v in sorted(part.dense - near):
        if v in part.heavy:
            sets[v] = [v, *graph.adj[v]]
        else:
            sets[v] = nn.trees[v].vertices()
    delta = capacity(max(n_amb, 2), k)
    inst = HittingSetInstance.build(range(graph.n), sets, delta) if sets else None
    if inst is not None:
        hit = solve_hitting(inst, backend, n_amb, rng_seed=rng_seed, c=c, clique=clique, stage="first-level centers")
    else:
        hit = HitOutcome(frozenset(), backend, None, 0, 0, 0)
    z1 = hit.z
    clique.broadcast(z1, note="first-level center flags")

    center_of: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for v, tree in sorted(nn.trees.items()):
        for w, _d, _p in tree.members:  # ascending (distance, ID)
            if w in z1:
                center_of[v] = w
                parent[v] = None if w == v else _next_hop(tree, w)
                break
    for v in sorted(part.heavy):
        if v in z1:
            s = v
        else:
            s = next((w for w in graph.adj[v] if w in z1), None)
            if s is None:
                continue
        center_of[v] = s
        parent[v] = None if s == v else s
    clique.broadcast(part.heavy, note="heavy centers")
    for u in sorted(near):
        if u in center_of:
            continue
        h = next((w for w in graph.adj[u] if w in part.heavy and w in center_of), None)
        if h is not None:
            center_of[u] = center_of[h]
            parent[u] = h
    missing = sorted(v for v in part.dense if v not in center_of)
    if missing:
        raise HittingSetFailure(missing, "first-level clustering")
    clustering = Clustering(frozenset(center_of.values()), center_of, parent, ball_radius(k))
    return clustering, clustering.tree_edges(), hit


@dataclass
class SecondLevel:
    clustering: Clustering
    edges: frozenset[Edge]
    low: frozenset[int]
    high: frozenset[int]
    hit: HitOutcome | None


def build_second_level(
    graph: Graph,
    part: Partition,
    first: Clustering,
    k: int,
    backend: str = "random",
    rng_seed: int = 0,
    c: float = 2.0,
    clique: Clique | RelabeledClique | None = None,
    ambient_n: int | None = None,
) -> SecondLevel:
    """Low-adjacency witness edges plus the level-two clustering (equal to level one for odd k)."""
    clique = clique if clique is not None else Clique(graph.n)
    n_amb = ambient_n or graph.n
    clique.broadcast(first.center_of, note="first-level cluster IDs")
    limit = low_adjacency_threshold(n_amb, k)
    edges: set[Edge] = set()
    low, high = set(), set()
    adjacency: dict[int, dict[int, Edge]] = {}
    for v in sorted(part.dense):
        adj = adjacent_centers(graph, first, v)
        adjacency[v] = adj
        if len(adj) <= limit:
            low.add(v)
            own = first.center_of.get(v)
            edges.update(e for s, e in adj.items() if s != own)
        else:
            high.add(v)
    if k % 2 == 1:
        return SecondLevel(first, frozenset(edges), frozenset(low), frozenset(high), None)

    sets = {v: sorted(adjacency[v]) for v in sorted(high)}
    hit = None
    z2: frozenset[int] = frozenset()
    if sets:
        inst = HittingSetInstance.build(sorted(first.centers), sets, limit)
        hit = solve_hitting(inst, backend, n_amb, rng_seed=rng_seed + 1, c=c, clique=clique, stage="second-level centers")
        z2 = hit.z
    center_of = {v: s for v, s in first.center_of.items() if s in z2}
    parent = {v: first.parent[v] for v in center_of}
    missing = []
    for v in sorted(high):
        if first.center_of[v] in z2:
            continue
        s = next((s for s in sorted(adjacency[v]) if s in z2), None)
        if s is None:
            missing.append(v)
            continue
        e = adjacency[v][s]
        center_of[v] = s
        parent[v] = e[0] if e[1] == v else e[1]
        edges.add(e)
    if missing:
        raise HittingSetFailure(missing, "second-level clustering")
    clique.broadcast(high, note="second-level centers")
    second = Clustering(frozenset(z2), center_of, parent, ball_radius(k) + 1)
    return SecondLevel(second, frozenset(edges) | second.tree_edges(), frozenset(low), frozenset(high), hit)


def connect_clusters(
    graph: Graph,
    first: Clustering,
    second: Clustering,
    clique: Clique | RelabeledClique | None = None,
) -> frozenset[Edge]:
    """One minimum edge per adjacent (level-one, level-two) cluster pair with distinct centers."""
    clique = clique if clique is not None else Clique(graph.n)
    clique.broadcast(second.center_of, note="second-level cluster IDs")
    proposals: dict[tuple[int, int], tuple[int, Edge]] = {}  # (vertex x, center b) -> x's min edge
    for x in sorted(first.center_of):
        a = first.center_of[x]
        for y in graph.adj[x]:
            b = second.center_of.get(y)
            if b is None or b == a or (x, b) in proposals:
                continue
            proposals[(x, b)] = (a, canon(x, y))
    clique.route_batched(
        [Message(x, b, (e,)) for (x, b), (_a, e) in sorted(proposals.items())], note="pair proposals"
    )
    chosen: dict[tuple[int, int], Edge] = {}
    for (x, b), (a, e) in proposals.items():
        cur = chosen.get((a, b))
        if cur is None or e < cur:
            chosen[(a, b)] = e
    notes = []
    for (a, b), e in sorted(chosen.items()):
        x = e[0] if first.center_of.get(e[0]) == a else e[1]
        notes.append(Message(b, x, (e,)))
    clique.route_batched(notes, note="pair notifications")
    return frozenset(chosen.values())


@dataclass
class DenseSpanner:
    edges: frozenset[Edge]
    first: Clustering
    second: Clustering
    low: frozenset[int]
    high: frozenset[int]
    hits: list[HitOutcome] = field(default_factory=list)


def cons_spanner_dense(
    graph: Graph,
    part: Partition,
    k: int,
    nn: NearestNeighbors,
    backend: str = "random",
    rng_seed: int = 0,
    c: float = 2.0,
    clique: Clique | RelabeledClique | None = None,
    ambient_n: int | None = None,
) -> DenseSpanner:
    if k < 6:
        raise InputError("the dense-region construction needs k >= 6")
    clique = clique if clique is not None else Clique(graph.n)
    first, tree_edges, hit1 = build_first_clustering(graph, part, k, nn, backend, rng_seed, c, clique, ambient_n)
    lvl2 = build_second_level(graph, part, first, k, backend, rng_seed, c, clique, ambient_n)
    pairs = connect_clusters(graph, first, lvl2.clustering, clique)
    hits = [hit1] + ([lvl2.hit] if lvl2.hit is not None else [])
    return DenseSpanner(tree_edges | lvl2.edges | pairs, first, lvl2.clustering, lvl2.low, lvl2.high, hits)
