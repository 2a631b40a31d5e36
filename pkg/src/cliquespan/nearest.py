"""Truncated nearest-neighbor trees by graph exponentiation on the clique.

Every light vertex learns the ``capacity(n, k)`` vertices closest to it in the
light subgraph, within ``ball_radius(k)`` hops, with parent pointers. Each
phase roughly doubles the explored radius: a vertex merges the trees of the
vertices in its current tree that also have it in theirs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .clique import Clique, Message, RelabeledClique, RoundLedger
from .errors import InputError, UnsupportedK
from .graph import Graph, TruncatedBfsTree


# ---------------------------------------------------------------------- thresholds


def _min_power_at_least(n: int, k: int, strict: bool) -> int:
    """Smallest integer c >= 1 with c^(2k) >= n^(k-2) (or > when ``strict``)."""
    target = n ** (k - 2)
    c = max(1, int(math.floor(n ** (0.5 - 1.0 / k))) - 1)
    while True:
        p = c ** (2 * k)
        if p > target or (p == target and not strict):
            return c
        c += 1


def capacity(n: int, k: int) -> int:
    """Tree capacity: the ceiling of n^(1/2 - 1/k), computed exactly."""
    if n < 2 or k < 2:
        raise InputError("capacity needs n >= 2 and k >= 2")
    return _min_power_at_least(n, k, strict=False)


def dense_count(n: int, k: int) -> int:
    """Smallest ball size that strictly exceeds n^(1/2 - 1/k)."""
    if n < 2 or k < 2:
        raise InputError("dense_count needs n >= 2 and k >= 2")
    return _min_power_at_least(n, k, strict=True)


def exceeds_threshold(count: int, n: int, k: int) -> bool:
    return count ** (2 * k) > n ** (k - 2)


def is_heavy(degree: int, n: int) -> bool:
    return degree * degree >= n


def ball_radius(k: int) -> int:
    """Hop radius of the collected balls: k/2 - 1 for even k, floor(k/2) for odd k."""
    return k // 2 - 1 if k % 2 == 0 else k // 2


@dataclass(frozen=True)
class GammaSchedule:
    k: int
    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)


def gamma_schedule(k: int) -> GammaSchedule:
    if k < 6:
        raise UnsupportedK(f"exponentiation schedule needs k >= 6, got {k}; use the small-k algorithm")
    cap = k // 2
    vals = [2]
    while vals[-1] < cap:
        vals.append(min(2 * vals[-1] - 1, cap))
    return GammaSchedule(k, tuple(vals))


def closed_form_phases(k: int) -> int:
    half = k // 2
    i = 1
    while 2 ** (i - 1) + 1 < half:
        i += 1
    return i


# ---------------------------------------------------------------------- result


@dataclass
class NearestNeighbors:
    n: int
    ambient_n: int
    k: int
    radius: int
    capacity: int
    heavy: frozenset[int]
    light_graph: Graph
    trees: dict[int, TruncatedBfsTree]
    exceeds: frozenset[int]
    phases: int
    ledger: RoundLedger
    history: list[dict[int, int]] = field(default_factory=list)


# per-vertex working tree: vertex -> (distance, parent)
_Tree = dict[int, tuple[int, "int | None"]]


def _ordered(tree: _Tree, limit: int, max_dist: int) -> _Tree:
    items = sorted(((d, w, p) for w, (d, p) in tree.items() if d <= max_dist))
    return {w: (d, p) for d, w, p in items[:limit]}


def _freeze(root: int, tree: _Tree, radius: int, cap: int) -> TruncatedBfsTree:
    items = sorted((d, w, p) for w, (d, p) in tree.items())
    return TruncatedBfsTree(root, tuple((w, d, p) for d, w, p in items), radius, cap)


def nearest_neighbors(
    graph: Graph,
    k: int,
    clique: Clique | RelabeledClique | None = None,
    ambient_n: int | None = None,
) -> NearestNeighbors:
    """Run the exponentiation protocol and return one tree per light vertex.

    ``ambient_n`` sets the heaviness and capacity thresholds (defaults to
    ``graph.n``); it differs from ``graph.n`` when the input is a contracted
    virtual graph.
    """
    schedule = gamma_schedule(k)
    n_amb = ambient_n or graph.n
    if graph.n < 1:
        raise InputError("empty graph")
    clique = clique if clique is not None else Clique(graph.n)
    if clique.n != graph.n:
        raise InputError(f"clique has {clique.n} nodes, graph has {graph.n}")
    rho = ball_radius(k)
    cap = capacity(max(n_amb, 2), k)
    full = dense_count(max(n_amb, 2), k)

    # Heavy flags are common knowledge after one broadcast round.
    heavy = frozenset(v for v in range(graph.n) if is_heavy(graph.degree(v), n_amb))
    clique.broadcast(range(graph.n), note="heavy flags")
    light = [v for v in range(graph.n) if v not in heavy]
    light_set = set(light)
    g_light = graph.induced(light_set)
    adj = g_light.adj

    # Two-hop collection: every light vertex ships its light neighbor list to
    # each light neighbor.
    msgs = [Message(u, v, adj[u]) for u in light for v in adj[u]]
    inbox = clique.route_batched(msgs, note="two-hop collection")
    trees: dict[int, _Tree] = {}
    for v in light:
        t: _Tree = {v: (0, None)}
        for u in adj[v]:
            t[u] = (1, v)
        for m in inbox[v]:  # sorted by src, so first writer is the min-ID parent
            for w in m.payload:
                if w not in t:
                    t[w] = (2, m.src)
        trees[v] = _ordered(t, full, schedule.values[0])
    history = [{v: len(t) for v, t in trees.items()}]

    for i in range(1, len(schedule.values)):
        nxt = schedule.values[i]
        # Membership announcements: u tells each v in its tree that v is in it.
        announce = [Message(u, v, (u,)) for u in light for v in trees[u] if v != u]
        ann_in = clique.exchange(announce, note=f"phase {i} announce")
        holders = {v: {m.src for m in ann_in[v]} for v in light}
        shipments = []
        for v in light:
            payload = tuple((w, d, p) for w, (d, p) in trees[v].items())
            for u in sorted(holders[v]):
                if u in trees[v]:  # mutual membership
                    shipments.append(Message(v, u, payload))
        tree_in = clique.route_batched(shipments, note=f"phase {i} trees")
        updated: dict[int, _Tree] = {}
        for u in light:
            tu = trees[u]
            if len(tu) >= full:
                updated[u] = tu
                continue
            best: dict[int, tuple[int, int | None]] = dict(tu)
            for m in tree_in[u]:
                v = m.src
                d_uv = tu[v][0]
                for w, d_vw, p_vw in m.payload:
                    if w == v:
                        continue
                    cand = (d_uv + d_vw, p_vw)
                    old = best.get(w)
                    if old is None or cand < old:
                        best[w] = cand
            updated[u] = _ordered(best, full, nxt)
        trees = updated
        history.append({v: len(t) for v, t in trees.items()})

    out: dict[int, TruncatedBfsTree] = {}
    exceeds = set()
    for v in light:
        ball = _ordered(trees[v], full, rho)
        if len(ball) >= full:
            exceeds.add(v)
        out[v] = _freeze(v, _ordered(ball, cap, rho), rho, cap)
    return NearestNeighbors(
        n=graph.n,
        ambient_n=n_amb,
        k=k,
        radius=rho,
        capacity=cap,
        heavy=heavy,
        light_graph=g_light,
        trees=out,
        exceeds=frozenset(exceeds),
        phases=len(schedule.values),
        ledger=clique.ledger,
        history=history,
    )
