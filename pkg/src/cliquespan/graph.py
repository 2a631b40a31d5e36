"""Undirected simple graphs, truncated BFS, distance oracles, generators and I/O."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .errors import InputError, ParseError, ResourceError
from .rng import stream

Edge = tuple[int, int]

DEFAULT_ORACLE_LIMIT = 5000


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def edge_set(edges: Iterable[Edge]) -> frozenset[Edge]:
    """Canonical EdgeSet: each pair stored with the smaller ID first."""
    return frozenset(canon(u, v) for u, v in edges)


@dataclass(frozen=True, eq=True)
class Graph:
    """Immutable graph over vertices ``0..n-1`` with sorted adjacency tuples."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], *, allow_duplicates: bool = False) -> "Graph":
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise InputError(f"self-loop at {u}")
            if v in nbrs[u] and not allow_duplicates:
                raise InputError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        i = _bisect(a, v)
        return i < len(a) and a[i] == v

    def edges(self) -> Iterator[Edge]:
        for u, a in enumerate(self.adj):
            for v in a:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def subgraph(self, edges: Iterable[Edge]) -> "Graph":
        """Same vertex set, restricted to ``edges`` (which must belong to the graph)."""
        return Graph.from_edges(self.n, edges)

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Same vertex IDs; keeps only edges with both endpoints in ``vertices``."""
        keep = set(vertices)
        return Graph(
            self.n,
            tuple(tuple(w for w in a if w in keep) if v in keep else () for v, a in enumerate(self.adj)),
        )

    def csr(self):
        from scipy.sparse import csr_matrix

        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adj])
        indices = np.fromiter((w for a in self.adj for w in a), dtype=np.int64, count=int(indptr[-1]))
        data = np.ones(len(indices), dtype=np.int8)
        return csr_matrix((data, indices, indptr), shape=(self.n, self.n))


def _bisect(a: tuple[int, ...], x: int) -> int:
    lo, hi = 0, len(a)
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


# --------------------------------------------------------------------------- BFS


@dataclass(frozen=True)
class TruncatedBfsTree:
    """The ``capacity`` closest vertices to ``root`` within ``radius`` hops.

    ``members`` is sorted by (distance, vertex); each entry is
    ``(vertex, distance, parent)`` with ``parent`` None for the root.
    """

    root: int
    members: tuple[tuple[int, int, int | None], ...]
    radius: int
    capacity: int

    def vertices(self) -> list[int]:
        return [v for v, _, _ in self.members]

    def vertex_set(self) -> frozenset[int]:
        return frozenset(v for v, _, _ in self.members)

    def dist(self) -> dict[int, int]:
        return {v: d for v, d, _ in self.members}

    def parents(self) -> dict[int, int | None]:
        return {v: p for v, _, p in self.members}

    def __len__(self) -> int:
        return len(self.members)

    def path_to(self, v: int) -> list[int]:
        """Vertices from ``v`` back to the root along parent links."""
        par = self.parents()
        out = [v]
        while par[out[-1]] is not None:
            out.append(par[out[-1]])
        return out


def bfs_truncated(
    graph: Graph,
    root: int,
    max_dist: int,
    max_count: int | float = math.inf,
    allowed: Callable[[int], bool] | None = None,
) -> TruncatedBfsTree:
    """Closest ``max_count`` vertices within ``max_dist`` hops, ties broken by ID.

    Levels are expanded in ascending vertex order so the first discoverer of a
    vertex is its smallest-ID parent. ``allowed`` restricts the search to the
    induced subgraph on the vertices it accepts.
    """
    if not 0 <= root < graph.n:
        raise InputError(f"root {root} outside [0, {graph.n})")
    if max_dist < 0 or max_count < 1:
        raise InputError("max_dist must be >= 0 and max_count >= 1")
    if allowed is not None and not allowed(root):
        raise InputError(f"root {root} is not allowed")
    members: list[tuple[int, int, int | None]] = [(root, 0, None)]
    seen = {root}
    frontier = [root]
    d = 0
    while frontier and d < max_dist and len(members) < max_count:
        d += 1
        found: dict[int, int] = {}
        for u in frontier:
            for w in graph.adj[u]:
                if w in seen or w in found:
                    continue
                if allowed is not None and not allowed(w):
                    continue
                found[w] = u
        level = sorted(found)
        seen.update(level)
        room = max_count - len(members)
        if len(level) > room:
            level = level[: int(room)]
        members.extend((w, d, found[w]) for w in level)
        frontier = level
    cap = max_count if math.isfinite(max_count) else graph.n
    return TruncatedBfsTree(root, tuple(members), max_dist, int(cap))


def bfs_distances(graph: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; -1 marks unreachable vertices."""
    dist = [-1] * graph.n
    dist[source] = 0
    q = deque([source])
    adj = graph.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                q.append(w)
    return dist


def all_pairs_distances(graph: Graph, limit: int | None = None) -> np.ndarray:
    """Exact hop-distance matrix (``inf`` when unreachable) by one BFS per vertex."""
    limit = oracle_limit() if limit is None else limit
    if graph.n > limit:
        raise ResourceError(f"all-pairs distances for n={graph.n} exceed the oracle limit {limit}")
    out = np.full((graph.n, graph.n), np.inf)
    for s in range(graph.n):
        row = np.asarray(bfs_distances(graph, s), dtype=float)
        row[row < 0] = np.inf
        out[s] = row
    return out


def oracle_limit() -> int:
    import os

    raw = os.environ.get("SPANNER_ORACLE_LIMIT")
    return int(raw) if raw else DEFAULT_ORACLE_LIMIT


# --------------------------------------------------------------------------- generators

MODELS = ("gnp", "path", "cycle", "star", "grid", "barbell", "complete", "petersen")


def generate(model: str, params: Mapping[str, float] | None = None, rng_seed: int = 0, **kw) -> Graph:
    """Build a graph from a named model.

    Parameters by model: gnp(n, p), path(n), cycle(n), star(n) with center 0,
    grid(rows, cols), barbell(clique, bridge) two cliques joined by a path of
    ``bridge`` edges, complete(n), petersen(). Only gnp consumes randomness.
    """
    p = dict(params or {})
    p.update(kw)
    try:
        if model == "gnp":
            return _gnp(int(p["n"]), float(p["p"]), rng_seed)
        if model == "path":
            n = _pos(p["n"])
            return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))
        if model == "cycle":
            n = _pos(p["n"])
            if n < 3:
                raise InputError("cycle needs n >= 3")
            return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))
        if model == "star":
            n = _pos(p["n"])
            return Graph.from_edges(n, ((0, i) for i in range(1, n)))
        if model == "complete":
            n = _pos(p["n"])
            return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))
        if model == "grid":
            r, c = _pos(p["rows"]), _pos(p["cols"])
            edges = []
            for i in range(r):
                for j in range(c):
                    v = i * c + j
                    if j + 1 < c:
                        edges.append((v, v + 1))
                    if i + 1 < r:
                        edges.append((v, v + c))
            return Graph.from_edges(r * c, edges)
        if model == "barbell":
            q, b = _pos(p["clique"]), int(p.get("bridge", 1))
            if b < 1:
                raise InputError("barbell bridge must have at least one edge")
            n = 2 * q + b - 1
            edges = [(i, j) for i in range(q) for j in range(i + 1, q)]
            off = q + b - 1
            edges += [(off + i, off + j) for i in range(q) for j in range(i + 1, q)]
            chain = [q - 1] + list(range(q, q + b - 1)) + [off]
            edges += list(zip(chain, chain[1:]))
            return Graph.from_edges(n, edges)
        if model == "petersen":
            outer = [(i, (i + 1) % 5) for i in range(5)]
            spokes = [(i, i + 5) for i in range(5)]
            inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
            return Graph.from_edges(10, outer + spokes + inner)
    except KeyError as exc:
        raise InputError(f"model {model!r} is missing parameter {exc.args[0]!r}") from None
    raise InputError(f"unknown graph model {model!r}; expected one of {', '.join(MODELS)}")


def _pos(x) -> int:
    v = int(x)
    if v < 1:
        raise InputError(f"size parameter must be positive, got {x}")
    return v


def _gnp(n: int, p: float, seed: int) -> Graph:
    if n < 1:
        raise InputError(f"gnp needs n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"gnp needs 0 <= p <= 1, got {p}")
    iu, ju = np.triu_indices(n, k=1)
    coins = stream(seed, "gnp", n).random(len(iu))
    keep = coins < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def parse_generator(text: str) -> tuple[str, dict[str, float]]:
    """``"gnp:200:0.1"`` -> ``("gnp", {"n": 200, "p": 0.1})``."""
    parts = text.split(":")
    model, args = parts[0], parts[1:]
    names = {
        "gnp": ("n", "p"),
        "path": ("n",),
        "cycle": ("n",),
        "star": ("n",),
        "complete": ("n",),
        "grid": ("rows", "cols"),
        "barbell": ("clique", "bridge"),
        "petersen": (),
    }.get(model)
    if names is None:
        raise InputError(f"unknown graph model {model!r}")
    if model == "barbell" and len(args) == 1:
        args.append("1")
    if len(args) != len(names):
        raise InputError(f"{model} expects {len(names)} parameter(s): {':'.join(names)}")
    try:
        return model, {k: float(a) for k, a in zip(names, args)}
    except ValueError:
        raise InputError(f"non-numeric parameter in {text!r}") from None


# --------------------------------------------------------------------------- edge-list I/O


def read_edge_list(text: str) -> Graph:
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise ParseError("header counts must be non-negative", lineno)
            header = (a, b)
            n = a
            continue
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(f"vertex ID out of range [0, {n})", lineno)
        if a == b:
            raise ParseError(f"self-loop at {a}", lineno)
        e = canon(a, b)
        if e in seen:
            raise ParseError(f"duplicate edge {e}", lineno)
        seen.add(e)
        edges.append(e)
    if header is None:
        raise ParseError("missing 'n m' header line")
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges but {len(edges)} were listed")
    return Graph.from_edges(n, edges)


def write_edge_list(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"
