"""Spanner for the sparse region by local simulation of a LOCAL-model algorithm.

``run_local_spanner`` is the reference (global) execution of the greedy
region-growing algorithm. Each sparse vertex collects the subgraph of the
sparse region around it and replays the same algorithm on that view; a
decision made by vertex ``w`` in round ``j`` is trusted only if
``dist(owner, w) + j <= radius``, which is exactly what the view can certify.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .clique import Clique, Message, RelabeledClique
from .errors import ConsistencyError
from .graph import Edge, Graph, canon
from .nearest import NearestNeighbors, ball_radius
from .partition import Partition


def integer_root_ceil(n: int, k: int) -> int:
    """Smallest integer s with s^k >= n."""
    s = max(1, int(round(n ** (1.0 / k))) - 1)
    while s**k < n:
        s += 1
    while s > 1 and (s - 1) ** k >= n:
        s -= 1
    return s


@dataclass
class LocalSpannerRun:
    sigma: int
    rounds: int
    decisions: list[tuple[int, int, int]]  # (round, vertex, selected neighbor)
    inactive_round: dict[int, int]  # vertex -> round at whose end it went inactive

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(canon(u, w) for _, u, w in self.decisions)


def run_local_spanner(adj: Mapping[int, Sequence[int]], n: int, k: int, rounds: int | None = None) -> LocalSpannerRun:
    """Execute the region-growing spanner on ``adj`` for ``rounds`` rounds (default k).

    ``n`` is the global vertex count that fixes the per-round selection cap.
    Neighbors outside ``adj`` are ignored. A vertex goes inactive at the end
    of the first round in which its working set is empty.
    """
    sigma = integer_root_ceil(max(n, 1), k)
    rounds = k if rounds is None else rounds
    verts = sorted(adj)
    present = set(verts)
    work = {u: {w for w in adj[u] if w in present} for u in verts}
    selected = {u: 1 for u in verts}  # |L(u)|, which starts as {u}
    covered = {u: {u} for u in verts}
    region = {u: frozenset((u,)) for u in verts}
    active = {u: True for u in verts}
    decisions: list[tuple[int, int, int]] = []
    gone: dict[int, int] = {}
    for i in range(1, rounds + 1):
        was_active = dict(active)
        prev = region
        nxt = dict(region)
        for u in verts:
            if not was_active[u]:
                continue
            ru = prev[u]
            wu = {w for w in work[u] if was_active[w] and not (prev[w] & ru)}
            cap = i * sigma
            while wu and selected[u] <= cap:
                w = min(wu)
                rw = prev[w]
                wu = {v for v in wu if not (prev[v] & rw)}
                selected[u] += 1
                covered[u] |= rw
                decisions.append((i, u, w))
            work[u] = wu
            nxt[u] = frozenset(covered[u])
            if not wu:
                active[u] = False
                gone[u] = i
        region = nxt
    return LocalSpannerRun(sigma, rounds, decisions, gone)


def local_spanner_global(graph: Graph, k: int) -> frozenset[Edge]:
    return run_local_spanner(dict(enumerate(graph.adj)), graph.n, k).edges


# ---------------------------------------------------------------------- local views


@dataclass(frozen=True)
class LocalView:
    owner: int
    adjacency: dict[int, tuple[int, ...]]  # induced on the owner's ball in the sparse region
    dist: dict[int, int]
    sparse_flags: dict[int, bool]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.adjacency)

    def edges(self) -> frozenset[Edge]:
        return frozenset(canon(u, w) for u, a in self.adjacency.items() for w in a)

    def graph(self, n: int) -> Graph:
        return Graph.from_edges(n, self.edges())


def sparse_region_graph(graph: Graph, part: Partition) -> Graph:
    return Graph.from_edges(graph.n, part.e_sparse)


def _ball(adj: Mapping[int, Sequence[int]], root: int, radius: int) -> dict[int, int]:
    dist = {root: 0}
    q = deque([root])
    while q:
        u = q.popleft()
        if dist[u] == radius:
            continue
        for w in adj.get(u, ()):
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def build_local_views(
    graph: Graph,
    part: Partition,
    k: int,
    nn: NearestNeighbors,
    clique: Clique | RelabeledClique | None = None,
) -> dict[int, LocalView]:
    """Each sparse vertex ships its edges to the sparse vertices of its light ball.

    A receiver then knows every edge incident to a sparse vertex of its ball,
    which is enough to rebuild its ball in the sparse region by BFS.
    """
    clique = clique if clique is not None else Clique(graph.n)
    rho = ball_radius(k)
    sparse = sorted(part.sparse)
    clique.broadcast(sparse, note="sparse flags")
    msgs = []
    for u in sparse:
        nbrs = graph.adj[u]
        if not nbrs:
            continue
        for v in nn.trees[u].vertices():
            if v != u and v in part.sparse:
                msgs.append(Message(u, v, nbrs))
    inbox = clique.route_batched(msgs, note="sparse edge collection")
    views: dict[int, LocalView] = {}
    for v in sparse:
        known: dict[int, set[int]] = {v: set(graph.adj[v])}
        for w in graph.adj[v]:
            known.setdefault(w, set()).add(v)
        for m in inbox[v]:
            known.setdefault(m.src, set()).update(m.payload)
            for w in m.payload:
                known.setdefault(w, set()).add(m.src)
        dist = _ball(known, v, rho)
        members = set(dist)
        adjacency = {x: tuple(sorted(y for y in known.get(x, ()) if y in members)) for x in sorted(members)}
        flags = {x: x in part.sparse for x in adjacency}
        views[v] = LocalView(v, adjacency, dist, flags)
    return views


# ---------------------------------------------------------------------- sparse spanner


@dataclass
class SparseSpanner:
    edges: frozenset[Edge]
    per_owner: dict[int, frozenset[Edge]] = field(default_factory=dict)
    kept_decisions: dict[int, list[tuple[int, int, int]]] = field(default_factory=dict)
    inactive_round: dict[int, int] = field(default_factory=dict)
    radius: int = 0


def cons_spanner_sparse(
    graph: Graph,
    part: Partition,
    k: int,
    views: Mapping[int, LocalView],
    clique: Clique | RelabeledClique | None = None,
    ambient_n: int | None = None,
) -> SparseSpanner:
    """Replay the local algorithm on every view and merge the certified edges.

    Raises ConsistencyError if a sparse vertex is still active after
    ``ball_radius(k)`` simulated rounds.
    """
    clique = clique if clique is not None else Clique(graph.n)
    rho = ball_radius(k)
    n = ambient_n or graph.n
    per_owner: dict[int, frozenset[Edge]] = {}
    kept: dict[int, list[tuple[int, int, int]]] = {}
    inactive: dict[int, int] = {}
    for u in sorted(part.sparse):
        view = views[u]
        run = run_local_spanner(view.adjacency, n, k, rounds=max(rho, 1))
        done = run.inactive_round.get(u)
        if done is None or done > rho:
            raise ConsistencyError(f"sparse vertex {u} still active after {rho} simulated rounds")
        inactive[u] = done
        ok = [(j, w, x) for j, w, x in run.decisions if view.dist[w] + j <= rho]
        kept[u] = ok
        per_owner[u] = frozenset(canon(w, x) for _, w, x in ok)
    # Notify sparse endpoints of the edges decided in each view.
    msgs = []
    for u, edges in per_owner.items():
        by_dst: dict[int, list[Edge]] = {}
        for e in sorted(edges):
            for end in e:
                if end != u and end in part.sparse:
                    by_dst.setdefault(end, []).append(e)
        msgs.extend(Message(u, v, tuple(es)) for v, es in sorted(by_dst.items()))
    clique.route_batched(msgs, note="sparse spanner notification")
    union = frozenset().union(*per_owner.values()) if per_owner else frozenset()
    return SparseSpanner(union, per_owner, kept, inactive, rho)
