"""The standard benchmark corpus: seeded random graphs plus structured families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .graph import Graph, generate


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    model: str
    params: tuple[tuple[str, float], ...]
    seed: int = 0

    def build(self) -> Graph:
        return generate(self.model, dict(self.params), rng_seed=self.seed)


def _entry(model: str, seed: int = 0, **params: Any) -> CorpusEntry:
    tag = ":".join(f"{v:g}" for v in params.values())
    name = f"{model}:{tag}" + (f"#{seed}" if model == "gnp" else "")
    return CorpusEntry(name, model, tuple(params.items()), seed)


def standard_corpus() -> list[CorpusEntry]:
    """50 graphs: gnp with n in 64..1024 and p in 0.02..0.5, paths, grids, barbells and a few extras."""
    out: list[CorpusEntry] = []
    seed = 100
    for n in (64, 128, 256, 512):
        for p in (0.02, 0.05, 0.1, 0.2, 0.5):
            out.append(_entry("gnp", seed, n=n, p=p))
            seed += 1
    for p in (0.02, 0.05, 0.1, 0.5):
        out.append(_entry("gnp", seed, n=1024, p=p))
        seed += 1
    for n, p in ((100, 0.03), (100, 0.3), (300, 0.03), (300, 0.3), (200, 0.08), (200, 0.15), (200, 0.4)):
        out.append(_entry("gnp", seed, n=n, p=p))
        seed += 1
    out += [_entry("path", n=n) for n in (10, 50, 200, 1000)]
    out += [_entry("grid", rows=r, cols=c) for r, c in ((5, 5), (10, 10), (20, 20), (8, 30), (30, 30))]
    out += [_entry("barbell", clique=c, bridge=b) for c, b in ((10, 1), (20, 5), (30, 10), (50, 3))]
    out += [_entry("cycle", n=20), _entry("cycle", n=101), _entry("star", n=50)]
    out += [_entry("complete", n=30), _entry("complete", n=60), _entry("petersen")]
    return out


def sparse_corpus() -> list[CorpusEntry]:
    """Low-degree graphs whose vertices are mostly sparse, for the local-simulation checks."""
    out = [_entry("gnp", 500 + i, n=n, p=p) for i, (n, p) in enumerate(
        ((300, 0.004), (500, 0.003), (800, 0.002), (1000, 0.0025), (400, 0.006), (600, 0.004))
    )]
    out += [_entry("path", n=300), _entry("cycle", n=400), _entry("grid", rows=3, cols=200)]
    return out
