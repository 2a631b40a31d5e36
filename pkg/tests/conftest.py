import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cliquespan.graph import Graph

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=1, max_n=30, max_p=1.0):
    """Random simple graphs as an (n, edge-mask) draw."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    p = draw(st.floats(0.0, max_p))
    seed = draw(st.integers(0, 2**32 - 1))
    import numpy as np

    coins = np.random.default_rng(seed).random(len(pairs))
    return Graph.from_edges(n, [e for e, c in zip(pairs, coins) if c < p])


def brute_distances(graph: Graph) -> list[list[float]]:
    """Floyd-Warshall; independent of the BFS code under test."""
    inf = float("inf")
    n = graph.n
    d = [[0.0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in graph.edges():
        d[u][v] = d[v][u] = 1.0
    for m in range(n):
        dm = d[m]
        for i in range(n):
            dim = d[i][m]
            if dim == inf:
                continue
            di = d[i]
            for j in range(n):
                if dim + dm[j] < di[j]:
                    di[j] = dim + dm[j]
    return d


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
