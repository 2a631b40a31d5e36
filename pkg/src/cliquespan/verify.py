"""Ground-truth audits: stretch, clustering structure, hitting sets, sizes."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .dense import Clustering, DenseSpanner
from .errors import InputError, ResourceError
from .graph import Edge, Graph, canon, oracle_limit
from .hitting import audit_hitting
from .nearest import ball_radius
from .partition import Partition

__all__ = [
    "StretchAudit",
    "audit_stretch",
    "ClusteringAudit",
    "audit_clustering",
    "audit_hitting",
    "DenseCaseAudit",
    "audit_dense_cases",
    "polylog_envelope",
    "linear_envelope",
    "audit_contraction_depths",
    "pair_distances",
]

_SOURCE_BATCH = 256


def _adjacency_matrix(n: int, edges: Iterable[Edge]) -> csr_matrix:
    es = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([es[:, 0], es[:, 1]])
    cols = np.concatenate([es[:, 1], es[:, 0]])
    return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))


def pair_distances(n: int, edges: Iterable[Edge], pairs: Iterable[Edge]) -> dict[Edge, float]:
    """Hop distance in the graph (n, edges) for each requested pair; inf when disconnected."""
    pairs = list(pairs)
    if not pairs:
        return {}
    by_src: dict[int, list[int]] = {}
    load = Counter(v for p in pairs for v in p)
    for u, v in pairs:
        src, dst = (u, v) if load[u] >= load[v] else (v, u)
        by_src.setdefault(src, []).append(dst)
    mat = _adjacency_matrix(n, edges)
    srcs = sorted(by_src)
    out: dict[Edge, float] = {}
    for lo in range(0, len(srcs), _SOURCE_BATCH):
        chunk = srcs[lo : lo + _SOURCE_BATCH]
        dist = shortest_path(mat, method="D", unweighted=True, indices=chunk)
        for row, s in enumerate(chunk):
            for t in by_src[s]:
                out[canon(s, t)] = float(dist[row, t])
    return out


@dataclass
class StretchAudit:
    bound: float
    max_stretch: float
    argmax: Edge | None
    omitted: dict[Edge, float]  # stretch of each edge of E not in H; kept edges have stretch 1
    histogram: dict[float, int]
    passed: bool

    def stretch(self, e: Edge) -> float:
        return self.omitted.get(canon(*e), 1.0)


def audit_stretch(graph: Graph, spanner: Iterable[Edge], bound: float) -> StretchAudit:
    """Max over edges of G of the hop distance in H between the endpoints.

    For unweighted graphs this is also the max stretch over all vertex pairs.
    """
    if graph.n > oracle_limit():
        raise ResourceError(f"n={graph.n} exceeds the oracle limit {oracle_limit()}")
    H = {canon(*e) for e in spanner}
    E = graph.edge_set()
    extra = H - E
    if extra:
        raise InputError(f"spanner edge {min(extra)} is not an edge of the graph")
    missing = sorted(E - H)
    omitted = pair_distances(graph.n, H, missing) if H else {e: math.inf for e in missing}
    hist = Counter(omitted.values())
    if H:
        hist[1.0] += len(H)
    if omitted:
        argmax = max(sorted(omitted), key=lambda e: omitted[e])
        worst = omitted[argmax]
    else:
        argmax = min(H) if H else None
        worst = 1.0 if H else 0.0
    return StretchAudit(bound, worst, argmax, omitted, dict(sorted(hist.items())), worst <= bound)


@dataclass
class ClusteringAudit:
    passed: bool
    violation: str | None
    max_depth: int
    clusters: int


def audit_clustering(
    graph: Graph,
    clustering: Clustering | Mapping[int, Iterable[int]],
    spanner: Iterable[Edge],
    expected_depth: int,
) -> ClusteringAudit:
    """Disjoint clusters, each spanned by spanner edges within depth ``expected_depth`` of its center.

    A ``Clustering`` is checked through its parent pointers. A plain
    center -> members mapping is checked by BFS over spanner edges whose
    endpoints share a cluster.
    """
    H = {canon(*e) for e in spanner}
    if isinstance(clustering, Clustering):
        return _audit_parent_clustering(clustering, H, expected_depth)
    owner: dict[int, int] = {}
    for s, members in sorted(clustering.items()):
        for v in members:
            if v in owner:
                return ClusteringAudit(False, f"vertex {v} lies in clusters {owner[v]} and {s}", 0, len(clustering))
            owner[v] = s
        if owner.get(s) != s:
            return ClusteringAudit(False, f"center {s} is not a member of its own cluster", 0, len(clustering))
    if not owner:
        return ClusteringAudit(True, None, 0, 0)
    # A virtual root adjacent to every center gives per-cluster depths in one BFS.
    root = graph.n
    inner = [e for e in H if owner.get(e[0]) is not None and owner.get(e[0]) == owner.get(e[1])]
    inner += [(s, root) for s in clustering]
    mat = _adjacency_matrix(graph.n + 1, inner)
    dist = shortest_path(mat, method="D", unweighted=True, indices=[root])[0]
    worst = 0
    for v in sorted(owner):
        d = dist[v] - 1
        if not np.isfinite(d):
            return ClusteringAudit(False, f"vertex {v} is not connected to center {owner[v]} inside its cluster", worst, len(clustering))
        worst = max(worst, int(d))
        if d > expected_depth:
            return ClusteringAudit(
                False, f"vertex {v} is at depth {int(d)} from center {owner[v]}, above {expected_depth}", worst, len(clustering)
            )
    return ClusteringAudit(True, None, worst, len(clustering))


def _audit_parent_clustering(cl: Clustering, H: set[Edge], expected_depth: int) -> ClusteringAudit:
    for v, s in sorted(cl.center_of.items()):
        if s not in cl.centers or cl.center_of.get(s) != s:
            return ClusteringAudit(False, f"vertex {v} points to {s}, which is not a clustered center", 0, len(cl.centers))
        p = cl.parent.get(v)
        if (p is None) != (v == s):
            return ClusteringAudit(False, f"vertex {v} has a bad parent pointer {p}", 0, len(cl.centers))
        if p is not None:
            if cl.center_of.get(p) != s:
                return ClusteringAudit(False, f"tree edge {canon(v, p)} leaves cluster {s}", 0, len(cl.centers))
            if canon(v, p) not in H:
                return ClusteringAudit(False, f"tree edge {canon(v, p)} is missing from the spanner", 0, len(cl.centers))
    worst = cl.max_depth()
    if worst > expected_depth:
        return ClusteringAudit(False, f"depth {worst} exceeds {expected_depth}", worst, len(cl.centers))
    return ClusteringAudit(True, None, worst, len(cl.centers))


@dataclass
class DenseCaseAudit:
    """Dense edges grouped by how the dense construction covers them."""

    counts: dict[str, int] = field(default_factory=dict)
    worst: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, int] = field(default_factory=dict)
    failures: list[tuple[str, Edge, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def audit_dense_cases(graph: Graph, part: Partition, k: int, dense: DenseSpanner) -> DenseCaseAudit:
    """Per-edge bound check in the dense spanner alone.

    same-cluster: both ends share a level-one center, at most twice the tree depth.
    low-adjacency: one end is low and reached the other's cluster with one edge.
    two-level: everything else, at most 2k-1.
    """
    rho = ball_radius(k)
    bounds = {"same-cluster": 2 * rho, "low-adjacency": 2 * rho + 1, "two-level": 2 * k - 1}
    first = dense.first
    labels: dict[Edge, str] = {}
    for u, v in sorted(part.e_dense):
        cu, cv = first.center_of.get(u), first.center_of.get(v)
        if cu is not None and cu == cv:
            labels[(u, v)] = "same-cluster"
        elif (u in dense.low and cv is not None) or (v in dense.low and cu is not None):
            labels[(u, v)] = "low-adjacency"
        else:
            labels[(u, v)] = "two-level"
    dist = pair_distances(graph.n, dense.edges, labels) if dense.edges else {e: math.inf for e in labels}
    audit = DenseCaseAudit(bounds=bounds)
    for e, case in labels.items():
        d = dist[e]
        audit.counts[case] = audit.counts.get(case, 0) + 1
        audit.worst[case] = max(audit.worst.get(case, 0.0), d)
        if d > bounds[case]:
            audit.failures.append((case, e, d))
    return audit


def polylog_envelope(n: int, k: int) -> float:
    """k * n^(1+1/k) * (ln n)^2."""
    n = max(n, 2)
    return k * n ** (1 + 1 / k) * math.log(n) ** 2


def linear_envelope(n: int, k: int) -> float:
    """k * n^(1+1/k)."""
    n = max(n, 1)
    return k * n ** (1 + 1 / k)


def audit_contraction_depths(graph: Graph, result) -> list[ClusteringAudit]:
    """Check each contraction phase's clusters against the spanner built before that phase.

    ``result`` is an ``OkResult``; phase i clusters must reach their center
    within ``phase.depth_bound`` hops along intra-cluster spanner edges.
    """
    audits = []
    for i, phase in enumerate(result.phases):
        built = result.snapshots[i - 1] if i > 0 else frozenset()
        audits.append(audit_clustering(graph, phase.clusters, built, phase.depth_bound))
    return audits
