"""End-to-end spanner algorithms and their reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

from .clique import Clique, Message, RelabeledClique
from .dense import (
    Clustering,
    adjacent_centers,
    build_first_clustering,
    cons_spanner_dense,
    low_adjacency_threshold,
)
from .errors import HittingSetFailure, InputError, UnsupportedK
from .graph import Edge, Graph, canon
from .hitting import HittingSetInstance, solve_hitting
from .nearest import nearest_neighbors
from .partition import classify
from .rng import stream
from .sparse import build_local_views, cons_spanner_sparse

CSV_COLUMNS = ("algorithm", "n", "m", "k", "edges", "max_stretch", "rounds", "routing_rounds", "seed", "success")
ALGORITHMS = ("randomized", "deterministic", "ok", "baswana-sen", "small-k")


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.6g}"
    if x is None:
        return ""
    return str(x)


@dataclass
class SpannerReport:
    algorithm: str
    n: int
    m: int
    k: int
    edges: int
    max_stretch: float | None
    rounds: int
    routing_rounds: int
    backend: str
    seed: int
    success: bool
    bound: float | None = None
    violations: int = 0
    max_routing_load: int = 0
    word_limit: int = 0
    error: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def total_rounds(self) -> int:
        return self.rounds + self.routing_rounds

    def to_json(self) -> str:
        d = asdict(self)
        for key, val in list(d.items()):
            if isinstance(val, float):
                d[key] = float(f"{val:.6g}")
        return json.dumps(d, sort_keys=True)

    def csv_row(self) -> str:
        return ",".join(_fmt(getattr(self, c)) for c in CSV_COLUMNS)


def _finish(
    graph: Graph,
    algorithm: str,
    k: int,
    edges: frozenset[Edge],
    clique: Clique,
    backend: str,
    seed: int,
    bound: float | None,
    verify: bool,
    extra: dict[str, Any] | None = None,
    error: str = "",
) -> SpannerReport:
    ledger = clique.ledger
    stretch = None
    ok = not error and not ledger.violations
    if verify and not error:
        from .verify import audit_stretch

        audit = audit_stretch(graph, edges, bound if bound is not None else math.inf)
        stretch = audit.max_stretch
        ok = ok and audit.passed
    return SpannerReport(
        algorithm=algorithm,
        n=graph.n,
        m=graph.m,
        k=k,
        edges=len(edges),
        max_stretch=stretch,
        rounds=ledger.rounds,
        routing_rounds=ledger.routing_rounds,
        backend=backend,
        seed=seed,
        success=ok,
        bound=bound,
        violations=len(ledger.violations),
        max_routing_load=ledger.max_routing_load,
        word_limit=clique.word_limit,
        error=error,
        extra=extra or {},
    )


# ---------------------------------------------------------------------- (2k-1) compositions


@dataclass
class Composition:
    edges: frozenset[Edge]
    sparse_edges: frozenset[Edge]
    dense_edges: frozenset[Edge]
    details: dict[str, Any]


def compose_spanner(
    graph: Graph, k: int, backend: str, rng_seed: int = 0, c: float = 2.0, clique: Clique | None = None
) -> Composition:
    """Sparse-region spanner plus dense-region spanner; raises HittingSetFailure on a randomized miss."""
    if k < 6:
        raise UnsupportedK(f"k={k} is below 6; use the small-k algorithm")
    clique = clique if clique is not None else Clique(graph.n)
    nn = nearest_neighbors(graph, k, clique)
    part = classify(graph, k, nn)
    views = build_local_views(graph, part, k, nn, clique)
    sparse = cons_spanner_sparse(graph, part, k, views, clique)
    dense = cons_spanner_dense(graph, part, k, nn, backend, rng_seed, c, clique)
    details = {
        "phases": nn.phases,
        "heavy": len(part.heavy),
        "dense": len(part.dense),
        "sparse": len(part.sparse),
        "z1": len(dense.first.centers),
        "z2": len(dense.second.centers),
        "nn": nn,
        "partition": part,
        "sparse_result": sparse,
        "dense_result": dense,
    }
    return Composition(sparse.edges | dense.edges, sparse.edges, dense.edges, details)


def _public(details: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in details.items() if isinstance(v, (int, float, str, bool, list))}


def randomized_spanner(
    graph: Graph, k: int, rng_seed: int = 0, c: float = 2.0, routing_cost: int = 1, verify: bool = True
) -> tuple[frozenset[Edge], SpannerReport]:
    clique = Clique(max(graph.n, 1), routing_cost=routing_cost)
    bound = 2 * k - 1
    try:
        comp = compose_spanner(graph, k, "random", rng_seed, c, clique)
    except HittingSetFailure as exc:
        return frozenset(), _finish(graph, "randomized", k, frozenset(), clique, "random", rng_seed, bound, verify, error=str(exc))
    rep = _finish(graph, "randomized", k, comp.edges, clique, "random", rng_seed, bound, verify, _public(comp.details))
    return comp.edges, rep


def deterministic_spanner(
    graph: Graph, k: int, backend: str = "derand", c: float = 2.0, routing_cost: int = 1, verify: bool = True
) -> tuple[frozenset[Edge], SpannerReport]:
    if backend == "random":
        raise InputError("the deterministic spanner needs a deterministic backend (dwise or derand)")
    clique = Clique(max(graph.n, 1), routing_cost=routing_cost)
    comp = compose_spanner(graph, k, backend, 0, c, clique)
    rep = _finish(graph, "deterministic", k, comp.edges, clique, backend, 0, 2 * k - 1, verify, _public(comp.details))
    return comp.edges, rep


# ---------------------------------------------------------------------- O(k) via contraction


@dataclass
class ContractionPhase:
    index: int
    k_used: int
    nodes: list[int]  # virtual node i is simulated by original vertex nodes[i]
    clusters: dict[int, frozenset[int]]  # virtual node (original ID) -> original vertices
    virtual_edges: int
    added_edges: int
    depth_bound: int


@dataclass
class OkResult:
    edges: frozenset[Edge]
    phases: list[ContractionPhase]
    final_nodes: int
    snapshots: list[frozenset[Edge]]  # spanner after each phase, for depth audits


def ok_spanner_run(
    graph: Graph,
    k: int,
    backend: str = "dwise",
    rng_seed: int = 0,
    c: float = 2.0,
    base_phases: int = 4,
    max_phases: int = 8,
    clique: Clique | None = None,
) -> OkResult:
    if k < 6:
        raise UnsupportedK(f"k={k} is below 6; use the small-k algorithm")
    n = graph.n
    clique = clique if clique is not None else Clique(max(n, 1))
    H: set[Edge] = set()
    nodes = list(range(n))  # original IDs of the current virtual nodes
    clusters: dict[int, frozenset[int]] = {v: frozenset((v,)) for v in nodes}
    vedges: dict[Edge, Edge] = {e: e for e in graph.edges()}  # virtual edge (original IDs) -> witness
    phases: list[ContractionPhase] = []
    snapshots: list[frozenset[Edge]] = []
    i = 0
    while nodes and vedges:
        if i >= base_phases and (len(nodes) ** 2 < n or i >= max_phases):
            break
        k_used = k if i == 0 else 7
        pos = {v: j for j, v in enumerate(nodes)}
        local = Graph.from_edges(len(nodes), ((pos[a], pos[b]) for a, b in vedges))
        sub = clique.relabeled(nodes)
        nn = nearest_neighbors(local, k_used, sub, ambient_n=n)
        part = classify(local, k_used, nn)
        views = build_local_views(local, part, k_used, nn, sub)
        sparse = cons_spanner_sparse(local, part, k_used, views, sub, ambient_n=n)
        first, tree_edges, _hit = build_first_clustering(
            local, part, k_used, nn, backend, rng_seed + i, c, sub, ambient_n=n
        )
        chosen = sparse.edges | tree_edges
        witnesses = {vedges[canon(nodes[a], nodes[b])] for a, b in chosen}
        _materialize(sub, nodes, chosen, vedges, clusters)
        H |= witnesses
        # Contract: new virtual nodes are the centers; clusters merge.
        new_clusters: dict[int, set[int]] = {}
        for a, s in first.center_of.items():
            new_clusters.setdefault(nodes[s], set()).update(clusters[nodes[a]])
        new_vedges: dict[Edge, Edge] = {}
        for (a, b), w in vedges.items():
            sa = first.center_of.get(pos[a])
            sb = first.center_of.get(pos[b])
            if sa is None or sb is None or sa == sb:
                continue
            key = canon(nodes[sa], nodes[sb])
            if key not in new_vedges or w < new_vedges[key]:
                new_vedges[key] = w
        _charge_contraction(sub, first, local)
        phases.append(
            ContractionPhase(i, k_used, nodes, clusters, len(vedges), len(witnesses), 7**i * k)
        )
        snapshots.append(frozenset(H))
        nodes = sorted(new_clusters)
        clusters = {v: frozenset(m) for v, m in new_clusters.items()}
        vedges = new_vedges
        i += 1
    # Connect every remaining adjacent pair.
    H |= set(vedges.values())
    if vedges:
        clique.route_batched(
            [Message(a, b, (w,)) for (a, b), w in sorted(vedges.items())], note="final pair connection"
        )
    phases.append(ContractionPhase(i, 7, nodes, clusters, len(vedges), len(vedges), 7**i * k))
    snapshots.append(frozenset(H))
    return OkResult(frozenset(H), phases, len(nodes), snapshots)


def _materialize(sub: RelabeledClique, nodes, chosen, vedges, clusters) -> None:
    """Each virtual endpoint tells the witness endpoint inside its own cluster."""
    msgs = []
    for a, b in sorted(chosen):
        w = vedges[canon(nodes[a], nodes[b])]
        for end in (a, b):
            owner = nodes[end]
            real = w[0] if w[0] in clusters[owner] else w[1]
            if real != owner:
                msgs.append(Message(owner, real, (w,)))
    sub.parent.route_batched(msgs, note="witness materialization")


def _charge_contraction(sub: RelabeledClique, first: Clustering, local: Graph) -> None:
    # cluster IDs broadcast, then per-pair proposals to new centers and one notification round
    sub.broadcast(first.center_of, note="contraction cluster IDs")
    load = 0
    for v in range(local.n):
        load = max(load, len(adjacent_centers(local, first, v)))
    sub.charge(routing=2, max_sent=min(load, sub.word_limit), max_received=min(load, sub.word_limit),
               note="contracted edge selection")


def ok_spanner(
    graph: Graph, k: int, backend: str = "dwise", rng_seed: int = 0, c: float = 2.0, routing_cost: int = 1,
    verify: bool = True,
) -> tuple[frozenset[Edge], SpannerReport]:
    clique = Clique(max(graph.n, 1), routing_cost=routing_cost)
    try:
        res = ok_spanner_run(graph, k, backend, rng_seed, c, clique=clique)
    except HittingSetFailure as exc:
        return frozenset(), _finish(graph, "ok", k, frozenset(), clique, backend, rng_seed, None, verify, error=str(exc))
    extra = {
        "phases": len(res.phases) - 1,
        "final_nodes": res.final_nodes,
        "phase_nodes": [len(p.nodes) for p in res.phases],
    }
    rep = _finish(graph, "ok", k, res.edges, clique, backend, rng_seed, None, verify, extra)
    if rep.max_stretch is not None:
        rep.extra["alpha"] = rep.max_stretch / k
    return res.edges, rep


# ---------------------------------------------------------------------- Baswana-Sen baseline


def baswana_sen(
    graph: Graph, k: int, rng_seed: int = 0, routing_cost: int = 1, verify: bool = True
) -> tuple[frozenset[Edge], SpannerReport]:
    """Classical cluster-sampling (2k-1)-spanner for unweighted graphs."""
    if k < 1:
        raise InputError("k must be >= 1")
    n = graph.n
    clique = Clique(max(n, 1), routing_cost=routing_cost)
    prob = max(n, 1) ** (-1.0 / k)
    center = {v: v for v in range(n)}
    H: set[Edge] = set()
    alive: dict[int, set[int]] = {v: set(graph.adj[v]) for v in range(n)}  # remaining edges
    for level in range(1, k):
        coins = stream(rng_seed, "baswana-sen", level).random(n)
        sampled = {s for s in set(center.values()) if coins[s] < prob}
        clique.broadcast(sampled, note=f"level {level} sampled centers")
        new_center: dict[int, int] = {}
        for v in sorted(center):
            if center[v] in sampled:
                new_center[v] = center[v]
        for v in sorted(center):
            if v in new_center:
                continue
            by_cluster: dict[int, int] = {}
            for x in sorted(alive[v]):
                s = center.get(x)
                if s is not None and s not in by_cluster:
                    by_cluster[s] = x
            hits = sorted(s for s in by_cluster if s in sampled)
            if hits:
                s = hits[0]
                H.add(canon(v, by_cluster[s]))
                new_center[v] = s
                drop = {x for x in alive[v] if center.get(x) == s}
            else:
                H.update(canon(v, x) for x in by_cluster.values())
                drop = {x for x in alive[v] if x in center}
            for x in drop:
                alive[v].discard(x)
                alive[x].discard(v)
        # drop intra-cluster edges and edges of now-unclustered vertices' leftovers
        for v in range(n):
            for x in list(alive[v]):
                if v in new_center and x in new_center and new_center[v] == new_center[x]:
                    alive[v].discard(x)
                    alive[x].discard(v)
        center = new_center
        clique.broadcast(center, note=f"level {level} cluster IDs")
    for v in range(n):
        seen: set[int] = set()
        for x in sorted(alive[v]):
            s = center.get(x, -1 - x)
            if s not in seen:
                seen.add(s)
                H.add(canon(v, x))
    clique.broadcast(range(n), note="final cluster edges")
    edges = frozenset(H)
    return edges, _finish(graph, "baswana-sen", k, edges, clique, "random", rng_seed, 2 * k - 1, verify)


# ---------------------------------------------------------------------- small k


def small_k_spanner(
    graph: Graph, k: int, backend: str = "derand", rng_seed: int = 0, c: float = 2.0, routing_cost: int = 1,
    verify: bool = True,
) -> tuple[frozenset[Edge], SpannerReport]:
    """Cluster levels with hitting-set centers; for k in 2..5."""
    if k not in (2, 3, 4, 5):
        raise UnsupportedK(f"the small-k algorithm supports k in 2..5, got {k}")
    n = graph.n
    clique = Clique(max(n, 1), routing_cost=routing_cost)
    try:
        edges = _small_k_edges(graph, k, backend, rng_seed, c, clique)
    except HittingSetFailure as exc:
        return frozenset(), _finish(graph, "small-k", k, frozenset(), clique, backend, rng_seed, 2 * k - 1, verify,
                                    error=str(exc))
    return edges, _finish(graph, "small-k", k, edges, clique, backend, rng_seed, 2 * k - 1, verify)


def _small_k_edges(graph: Graph, k: int, backend: str, rng_seed: int, c: float, clique: Clique) -> frozenset[Edge]:
    n = graph.n
    limit = low_adjacency_threshold(max(n, 2), k)
    center = {v: v for v in range(n)}
    H: set[Edge] = set()
    for level in range(1, k):
        clique.broadcast(center, note=f"level {level} cluster IDs")
        incident: dict[int, dict[int, Edge]] = {}
        for v in sorted(center):
            adj = {center[v]: canon(v, v)}  # own cluster always counts
            for x in graph.adj[v]:
                s = center.get(x)
                if s is not None and s not in adj:
                    adj[s] = canon(v, x)
            incident[v] = adj
        high = {v: sorted(a) for v, a in incident.items() if len(a) >= limit}
        z: frozenset[int] = frozenset()
        if high:
            inst = HittingSetInstance.build(sorted(set(center.values())), high, limit)
            z = solve_hitting(inst, backend, n, rng_seed=rng_seed + level, c=c, clique=clique,
                              stage=f"level {level} centers").z
        new_center: dict[int, int] = {}
        for v in sorted(center):
            adj = incident[v]
            if center[v] in z:
                new_center[v] = center[v]
                continue
            joined = [s for s in sorted(adj) if s in z]
            if joined:
                new_center[v] = joined[0]
                H.add(adj[joined[0]])
            else:
                H.update(e for s, e in adj.items() if s != center[v])
        center = new_center
        clique.broadcast(center, note=f"level {level} joins")
    for v in range(n):
        seen: set[int] = set()
        for x in graph.adj[v]:
            s = center.get(x)
            if s is not None and s != center.get(v) and s not in seen:
                seen.add(s)
                H.add(canon(v, x))
    clique.broadcast(range(n), note="final cluster edges")
    return frozenset(H)


def run_algorithm(
    graph: Graph,
    algorithm: str,
    k: int,
    backend: str | None = None,
    rng_seed: int = 0,
    routing_cost: int = 1,
    verify: bool = True,
    c: float = 2.0,
) -> tuple[frozenset[Edge], SpannerReport]:
    if algorithm == "randomized":
        if backend not in (None, "random"):
            raise InputError("the randomized spanner uses the random backend")
        return randomized_spanner(graph, k, rng_seed, c, routing_cost, verify)
    if algorithm == "deterministic":
        return deterministic_spanner(graph, k, backend or "derand", c, routing_cost, verify)
    if algorithm == "ok":
        return ok_spanner(graph, k, backend or "dwise", rng_seed, c, routing_cost, verify)
    if algorithm == "baswana-sen":
        return baswana_sen(graph, k, rng_seed, routing_cost, verify)
    if algorithm == "small-k":
        return small_k_spanner(graph, k, backend or "derand", rng_seed, c, routing_cost, verify)
    raise InputError(f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
