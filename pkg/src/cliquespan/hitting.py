"""Hitting sets: randomized sampling, d-wise hashing and greedy seed fixing.

Two seed sources can be derandomized by conditional expectations:

* ``dwise``: the seed of a :class:`DWiseFamily`, revealed one coefficient at a
  time from the top degree down.
* ``independent``: ``beta`` independent bits per universe element (an element
  joins Z iff all its bits are 0), revealed ``floor(log2 n)`` bits at a time.

Both minimize a pessimistic estimator Psi = size term + sum of miss terms and
assert that Psi never increases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse as sp

from .errors import HittingSetFailure, InputError, ParameterError, ResourceError
from .gf2 import DWiseFamily
from .rng import stream

DEFAULT_ENUM_LIMIT = 1 << 24
_TOL = 1e-9


@dataclass(frozen=True)
class HittingSetInstance:
    universe: tuple[int, ...]
    sets: Mapping[int, frozenset[int]]
    delta: int

    def __post_init__(self):
        if self.delta < 1:
            raise InputError("delta must be >= 1")
        uni = set(self.universe)
        if len(uni) != len(self.universe):
            raise InputError("universe has repeated elements")
        for u, s in self.sets.items():
            if not s <= uni:
                raise InputError(f"set of owner {u} leaves the universe")
            if len(s) < self.delta:
                raise InputError(f"set of owner {u} has {len(s)} < delta={self.delta} elements")

    @classmethod
    def build(cls, universe: Iterable[int], sets: Mapping[int, Iterable[int]], delta: int | None = None):
        fs = {int(u): frozenset(int(x) for x in s) for u, s in sets.items()}
        if delta is None:
            delta = min((len(s) for s in fs.values()), default=1)
        return cls(tuple(sorted(set(universe))), fs, max(1, delta))

    @property
    def owners(self) -> list[int]:
        return sorted(self.sets)

    def index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.universe)}

    def indexed_sets(self) -> list[np.ndarray]:
        idx = self.index()
        return [np.array(sorted(idx[x] for x in self.sets[u]), dtype=np.int64) for u in self.owners]

    def membership(self) -> sp.csr_matrix:
        """Sets x universe 0/1 matrix over re-indexed elements."""
        rows, cols = [], []
        for r, arr in enumerate(self.indexed_sets()):
            rows.extend([r] * len(arr))
            cols.extend(arr.tolist())
        data = np.ones(len(rows), dtype=np.float64)
        return sp.csr_matrix((data, (rows, cols)), shape=(len(self.sets), len(self.universe)))

    def missed_by(self, z: Iterable[int]) -> list[int]:
        zs = set(z)
        return [u for u in self.owners if not (self.sets[u] & zs)]


def audit_hitting(instance: HittingSetInstance, z: Iterable[int]) -> tuple[bool, int]:
    zs = set(z)
    return not instance.missed_by(zs), len(zs)


# ---------------------------------------------------------------------- randomized


def sampling_probability(delta: int, n: int, c: float = 2.0) -> float:
    return min(1.0, c * math.log(max(n, 2)) / delta)


def randomized_hitting_set(
    instance: HittingSetInstance, c: float = 2.0, rng_seed: int = 0, n: int | None = None
) -> frozenset[int]:
    """Keep each universe element independently with probability min(1, c ln n / delta)."""
    n = n or max(len(instance.universe), 2)
    p = sampling_probability(instance.delta, n, c)
    if p >= 1.0:
        return frozenset(instance.universe)
    coins = stream(rng_seed, "random-hitting").random(len(instance.universe))
    return frozenset(x for x, r in zip(instance.universe, coins) if r < p)


# ---------------------------------------------------------------------- d-wise draw


def dwise_beta(delta: int, n: int) -> tuple[int, bool]:
    """Output width floor(log2(sqrt(delta) / n^(1/16))), clamped to >= 1; returns (beta, clamped)."""
    raw = math.log2(math.sqrt(delta)) - math.log2(max(n, 2)) / 16.0
    beta = math.floor(raw + _TOL)
    return (beta, False) if beta >= 1 else (1, True)


@dataclass(frozen=True)
class DWiseDraw:
    seed: int
    z: frozenset[int]
    family: DWiseFamily
    clamped: bool


def zero_set(family: DWiseFamily, seed: int, instance: HittingSetInstance) -> frozenset[int]:
    idx = family.zero_set(seed, len(instance.universe))
    return frozenset(instance.universe[i] for i in idx.tolist())


def dwise_hitting_draw(
    instance: HittingSetInstance, d: int = 8, rng_seed: int = 0, n: int | None = None
) -> DWiseDraw:
    if d < 1:
        raise InputError("d must be >= 1")
    n = n or max(len(instance.universe), 2)
    beta, clamped = dwise_beta(instance.delta, n)
    fam = DWiseFamily.for_universe(len(instance.universe), beta, d)
    seed = _random_bits(stream(rng_seed, "dwise-seed"), fam.seed_bits)
    return DWiseDraw(seed, zero_set(fam, seed, instance), fam, clamped)


def _random_bits(gen: np.random.Generator, bits: int) -> int:
    words = gen.integers(0, 1 << 32, size=max(1, -(-bits // 32)), dtype=np.uint64)
    out = 0
    for w in words.tolist():
        out = (out << 32) | int(w)
    return out & ((1 << bits) - 1)


# ---------------------------------------------------------------------- enumeration oracles


def _completions(family: DWiseFamily, prefix: str, limit: int) -> np.ndarray:
    if any(ch not in "01" for ch in prefix):
        raise InputError("prefix must be a bit string")
    total = family.seed_bits
    if len(prefix) > total:
        raise InputError(f"prefix of {len(prefix)} bits exceeds the {total}-bit seed")
    free = total - len(prefix)
    if (1 << free) > limit:
        raise ResourceError(
            f"{free} free seed bits means 2^{free} completions, above the limit {limit}; "
            "fix more bits or shrink d or gamma"
        )
    head = int(prefix, 2) << free if prefix else 0
    return head + np.arange(1 << free, dtype=object if total > 62 else np.int64)


def _hash_matrix(family: DWiseFamily, seeds: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """(len(seeds), len(xs)) array of hash values."""
    w = family.width
    mask = (1 << w) - 1
    if seeds.dtype == object:
        coeffs = [
            np.array([(int(s) >> (w * (family.d - 1 - j))) & mask for s in seeds], dtype=np.int64)[:, None]
            for j in range(family.d)
        ]
    else:
        coeffs = [((seeds >> (w * (family.d - 1 - j))) & mask)[:, None] for j in range(family.d)]
    vals = family.field.poly_eval(coeffs, xs[None, :])
    return vals & ((1 << family.beta) - 1)


def conditional_failure_probability(
    family: DWiseFamily, fixed_prefix: str, members: Iterable[int], limit: int = DEFAULT_ENUM_LIMIT
) -> float:
    """Exact Pr[no member hashes to 0 | seed starts with ``fixed_prefix``], by enumeration.

    ``members`` are universe indices (already re-indexed to [0, U)).
    """
    xs = np.fromiter(members, dtype=np.int64)
    seeds = _completions(family, fixed_prefix, limit)
    misses = 0
    for block in _blocks(seeds, xs.size):
        h = _hash_matrix(family, block, xs)
        misses += int(np.count_nonzero(~(h == 0).any(axis=1)))
    return misses / len(seeds)


def size_term(
    family: DWiseFamily, fixed_prefix: str, size_threshold: int, universe_size: int, limit: int = DEFAULT_ENUM_LIMIT
) -> float:
    """Exact Pr[|Z| > size_threshold | prefix] over the universe ``[0, universe_size)``."""
    xs = np.arange(universe_size, dtype=np.int64)
    seeds = _completions(family, fixed_prefix, limit)
    over = 0
    for block in _blocks(seeds, xs.size):
        h = _hash_matrix(family, block, xs)
        over += int(np.count_nonzero((h == 0).sum(axis=1) > size_threshold))
    return over / len(seeds)


def _blocks(seeds: np.ndarray, width: int, budget: int = 1 << 22):
    step = max(1, budget // max(width, 1))
    for i in range(0, len(seeds), step):
        yield seeds[i : i + step]


# ---------------------------------------------------------------------- derandomization


@dataclass
class DerandResult:
    z: frozenset[int]
    seed: int
    seed_bits: int
    chunk_bits: int
    chunks: int
    source: str
    beta: int
    size_threshold: int
    psi: list[float] = field(default_factory=list)  # estimator before each chunk, then final
    initial_size_term: float = 0.0
    initial_miss_term: float = 0.0
    family: DWiseFamily | None = None

    @property
    def initial_psi(self) -> float:
        return self.initial_size_term + self.initial_miss_term


def default_size_threshold(universe_size: int, beta: int) -> int:
    return 2 * math.ceil(universe_size * 2.0**-beta)


def derandomized_hitting_set(
    instance: HittingSetInstance,
    d: int = 8,
    beta: int | None = None,
    size_threshold: int | None = None,
    n: int | None = None,
    source: str = "dwise",
    strict: bool = True,
) -> DerandResult:
    """Fix a seed greedily so the induced Z hits every set and stays small.

    With ``strict`` an initial estimator >= 1 raises ParameterError. Otherwise
    the greedy still runs and the caller must audit the result.
    """
    if not instance.sets:
        raise InputError("instance has no sets")
    n = n or max(len(instance.universe), 2)
    if beta is None:
        beta = dwise_beta(instance.delta, n)[0] if source == "dwise" else independent_beta(instance.delta, n)
    f = default_size_threshold(len(instance.universe), beta) if size_threshold is None else size_threshold
    if source == "dwise":
        res = _derand_dwise(instance, d, beta, f, strict)
    elif source == "independent":
        res = _derand_independent(instance, beta, f, n, strict)
    else:
        raise InputError(f"unknown seed source {source!r}")
    if res.initial_psi < 1.0:
        missed = instance.missed_by(res.z)
        if missed or len(res.z) > f:
            raise HittingSetFailure(missed, "derandomized hitting set despite initial estimator < 1")
    return res


def _check_monotone(before: float, after: float, where: str) -> None:
    if after > before + _TOL * max(1.0, abs(before)):
        raise AssertionError(f"estimator increased at {where}: {before!r} -> {after!r}")


def _derand_dwise(inst: HittingSetInstance, d: int, beta: int, f: int, strict: bool) -> DerandResult:
    if d < 2:
        raise InputError("the dwise seed source needs d >= 2")
    U = len(inst.universe)
    fam = DWiseFamily.for_universe(U, beta, d)
    w = fam.width
    F = fam.field
    q = 2.0**-beta
    sets = inst.indexed_sets()
    sizes = np.array([len(s) for s in sets], dtype=float)
    xs = np.arange(U, dtype=np.int64)

    # With >= 2 free low coefficients the hash values are pairwise independent
    # and uniform, so Markov and Chebyshev give a prefix-independent bound.
    size0 = U * q / (f + 1)
    miss0 = float(np.sum((1 - q) / (sizes * q)))
    if strict and size0 + miss0 >= 1.0:
        raise ParameterError(size0, miss0)
    psi = [size0 + miss0]
    coeffs: list[int] = []
    # Top d-2 coefficients: estimator is constant, smallest assignment wins.
    for _ in range(d - 2):
        coeffs.append(0)
        psi.append(size0 + miss0)

    fixed = F.poly_eval(coeffs, xs) if coeffs else np.zeros(U, dtype=np.int64)
    # Choosing a_1: exact value with only a_0 free, for every candidate.
    cands = np.arange(1 << w, dtype=np.int64)
    # Two more Horner steps follow the fixed part: value = P(x)*x^2 + a_1*x + a_0.
    shifted = F.mul(F.mul(fixed, xs), xs)
    vals = shifted[None, :] ^ F.mul(cands[:, None], xs[None, :])
    buckets = vals & ((1 << beta) - 1)
    scores = _bucket_scores(buckets, inst, beta, f)
    a1 = int(np.argmin(scores))
    _check_monotone(psi[-1], float(scores[a1]), "linear coefficient")
    psi.append(float(scores[a1]))
    coeffs.append(a1)

    # Choosing a_0: only its low beta bits matter; evaluate each bucket.
    row = buckets[a1]
    best_t, best_val = 0, math.inf
    for t in range(1 << beta):
        zmask = row == t
        val = float(zmask.sum() > f) + sum(1.0 for s in sets if not zmask[s].any())
        if val < best_val - _TOL:
            best_t, best_val = t, val
    _check_monotone(psi[-1], best_val, "constant coefficient")
    coeffs.append(best_t)
    psi.append(best_val)
    seed = fam.seed_of(coeffs)
    z = zero_set(fam, seed, inst)
    return DerandResult(
        z=z,
        seed=seed,
        seed_bits=fam.seed_bits,
        chunk_bits=w,
        chunks=d,
        source="dwise",
        beta=beta,
        size_threshold=f,
        psi=psi,
        initial_size_term=size0,
        initial_miss_term=miss0,
        family=fam,
    )


def _bucket_scores(buckets: np.ndarray, inst: HittingSetInstance, beta: int, f: int) -> np.ndarray:
    """Exact estimator per candidate row when the constant term is uniform.

    Z is the bucket equal to the constant's low bits: a set is missed with
    probability (empty buckets among its elements)/2^beta, and |Z| > f with
    probability (buckets holding more than f elements)/2^beta.
    """
    nb = 1 << beta
    m = inst.membership()  # sets x U
    cand = buckets.shape[0]
    distinct = np.zeros((cand, m.shape[0]), dtype=np.int64)
    oversize = np.zeros(cand, dtype=np.int64)
    for t in range(nb):
        ind = (buckets == t).astype(np.float64)
        oversize += (ind.sum(axis=1) > f).astype(np.int64)
        hits = np.asarray((m @ ind.T).T)  # cand x sets
        distinct += (hits > 0).astype(np.int64)
    miss = ((nb - distinct) / nb).sum(axis=1)
    return oversize / nb + miss


def independent_beta(delta: int, n: int, c: float = 2.0) -> int:
    p = sampling_probability(delta, n, c)
    return 0 if p >= 1.0 else max(0, math.floor(math.log2(1.0 / p) + _TOL))


def _derand_independent(inst: HittingSetInstance, beta: int, f: int, n: int, strict: bool) -> DerandResult:
    U = len(inst.universe)
    total = U * beta
    chunk = max(1, int(math.floor(math.log2(max(n, 2)))))
    sets = inst.indexed_sets()
    owners_of: list[list[int]] = [[] for _ in range(U)]
    for si, s in enumerate(sets):
        for x in s.tolist():
            owners_of[x].append(si)
    fixed_cnt = np.zeros(U, dtype=np.int64)
    dead = np.zeros(U, dtype=bool)  # some fixed bit is 1

    def q_of(cnt, is_dead):
        return np.where(is_dead, 0.0, 2.0 ** -(beta - cnt).astype(float))

    q = q_of(fixed_cnt, dead) if beta else np.ones(U)
    miss = np.array([float(np.prod(1 - q[s])) for s in sets])
    size0 = float(q.sum()) / (f + 1)
    miss0 = float(miss.sum())
    if strict and size0 + miss0 >= 1.0:
        raise ParameterError(size0, miss0)
    psi = [size0 + miss0]
    bits: list[int] = []
    pos = 0
    while pos < total:
        width = min(chunk, total - pos)
        span = np.arange(pos, pos + width)
        elem = span // beta
        affected = np.unique(elem)
        cands = np.arange(1 << width, dtype=np.int64)
        # bit b of the chunk (MSB first) is seed bit pos+b
        cbits = (cands[:, None] >> (width - 1 - np.arange(width))[None, :]) & 1
        new_cnt = np.tile(fixed_cnt[affected], (len(cands), 1))
        new_dead = np.tile(dead[affected], (len(cands), 1))
        for b in range(width):
            col = int(np.searchsorted(affected, elem[b]))
            new_cnt[:, col] += 1
            new_dead[:, col] |= cbits[:, b].astype(bool)
        q_new = np.where(new_dead, 0.0, 2.0 ** -(beta - new_cnt).astype(float))
        q_old = q[affected]
        size_new = (float(q.sum()) - q_old.sum() + q_new.sum(axis=1)) / (f + 1)
        ratio = (1 - q_new) / (1 - q_old)[None, :]
        touched = sorted({si for x in affected.tolist() for si in owners_of[x]})
        miss_new = np.full(len(cands), float(miss.sum()))
        for si in touched:
            cols = [j for j, x in enumerate(affected.tolist()) if si in owners_of[x]]
            factor = np.prod(ratio[:, cols], axis=1)
            miss_new += miss[si] * (factor - 1)
        score = size_new + miss_new
        best = int(np.argmin(score))
        _check_monotone(psi[-1], float(score[best]), f"seed bits {pos}..{pos + width - 1}")
        psi.append(float(score[best]))
        fixed_cnt[affected] = new_cnt[best]
        dead[affected] = new_dead[best]
        q = q_of(fixed_cnt, dead)
        for si in touched:
            miss[si] = float(np.prod(1 - q[sets[si]]))
        bits.extend(cbits[best].tolist())
        pos += width
    seed = int("".join(map(str, bits)), 2) if bits else 0
    in_z = ~dead if beta else np.ones(U, dtype=bool)
    z = frozenset(inst.universe[i] for i in np.flatnonzero(in_z).tolist())
    return DerandResult(
        z=z,
        seed=seed,
        seed_bits=total,
        chunk_bits=chunk,
        chunks=-(-total // chunk) if total else 0,
        source="independent",
        beta=beta,
        size_threshold=f,
        psi=psi,
        initial_size_term=size0,
        initial_miss_term=miss0,
    )


# ---------------------------------------------------------------------- spanner-facing wrapper

BACKENDS = ("random", "dwise", "derand")


@dataclass
class HitOutcome:
    z: frozenset[int]
    backend: str
    beta: int | None
    attempts: int
    seed_bits: int
    chunks: int
    fell_back_to_universe: bool = False


def solve_hitting(
    instance: HittingSetInstance,
    backend: str,
    n: int,
    rng_seed: int = 0,
    c: float = 2.0,
    d: int = 8,
    clique=None,
    stage: str = "hitting set",
) -> HitOutcome:
    """Hitting set for a spanner stage, with round accounting on ``clique``.

    Deterministic backends lower the output width one bit at a time until the
    greedy seed hits every set; width 0 selects the whole universe, which
    always hits. The randomized backend raises HittingSetFailure on a miss.
    """
    if not instance.sets:
        return HitOutcome(frozenset(), backend, None, 0, 0, 0)
    if backend == "random":
        z = randomized_hitting_set(instance, c=c, rng_seed=rng_seed, n=n)
        missed = instance.missed_by(z)
        if missed:
            raise HittingSetFailure(missed, stage)
        return HitOutcome(z, backend, None, 1, 0, 0)
    if backend == "dwise":
        top = dwise_beta(instance.delta, n)[0]
        source = "dwise"
    elif backend == "derand":
        top = independent_beta(instance.delta, n, c)
        source = "independent"
    else:
        raise InputError(f"unknown hitting backend {backend!r}; expected one of {', '.join(BACKENDS)}")
    bits = chunks = attempts = 0
    for beta in range(max(top, 1), 0, -1):  # at least one bit, even when sampling would keep everything
        attempts += 1
        res = derandomized_hitting_set(instance, d=d, beta=beta, n=n, source=source, strict=False)
        bits += res.seed_bits
        chunks += res.chunks
        if clique is not None:
            # per chunk: candidate scores routed to aggregators, then the winner is broadcast
            load = min(clique.word_limit, 1 << res.chunk_bits)
            clique.charge(routing=res.chunks, max_sent=load, max_received=load, note=f"{stage}: seed scores")
            clique.charge(plain=res.chunks, max_sent=1, max_received=1, note=f"{stage}: seed chunk")
        if not instance.missed_by(res.z):
            return HitOutcome(res.z, backend, beta, attempts, bits, chunks)
    return HitOutcome(frozenset(instance.universe), backend, 0, attempts, bits, chunks, True)
