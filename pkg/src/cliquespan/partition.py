"""Heavy/dense/sparse vertex classification and the induced edge split."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError, InputError
from .graph import Edge, Graph
from .nearest import NearestNeighbors


@dataclass(frozen=True)
class Partition:
    n: int
    k: int
    heavy: frozenset[int]
    dense: frozenset[int]
    sparse: frozenset[int]
    e_sparse: frozenset[Edge]
    e_dense: frozenset[Edge]
    near_heavy: frozenset[int] = frozenset()  # light vertices adjacent to a heavy one

    def check(self, graph: Graph) -> None:
        """Raise ConsistencyError on the first broken structural invariant."""
        all_v = set(range(graph.n))
        if not self.heavy <= self.dense:
            raise ConsistencyError("heavy vertex not marked dense")
        if self.dense | self.sparse != all_v or self.dense & self.sparse:
            raise ConsistencyError("dense and sparse do not partition the vertex set")
        edges = graph.edge_set()
        if self.e_sparse | self.e_dense != edges or self.e_sparse & self.e_dense:
            raise ConsistencyError("edge split is not a partition of E")
        for u, v in self.e_dense:
            if u not in self.dense or v not in self.dense:
                raise ConsistencyError(f"dense edge {(u, v)} has a sparse endpoint")
        for u, v in self.e_sparse:
            if u not in self.sparse and v not in self.sparse:
                raise ConsistencyError(f"sparse edge {(u, v)} has no sparse endpoint")
        for v in self.sparse:
            if any(w in self.heavy for w in graph.adj[v]):
                raise ConsistencyError(f"sparse vertex {v} is adjacent to a heavy vertex")


def classify(graph: Graph, k: int, nn: NearestNeighbors) -> Partition:
    if nn.n != graph.n or nn.k != k:
        raise InputError(f"neighbor trees were computed for (n={nn.n}, k={nn.k}), not (n={graph.n}, k={k})")
    heavy = nn.heavy
    near = {w for h in heavy for w in graph.adj[h] if w not in heavy}
    dense = set(heavy) | near | set(nn.exceeds)
    sparse = frozenset(range(graph.n)) - dense
    e_dense = frozenset(e for e in graph.edges() if e[0] in dense and e[1] in dense)
    e_sparse = graph.edge_set() - e_dense
    part = Partition(graph.n, k, heavy, frozenset(dense), sparse, e_sparse, e_dense, frozenset(near))
    part.check(graph)
    return part
