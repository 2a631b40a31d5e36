import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquespan.errors import InputError
from cliquespan.gf2 import PRIMITIVE_POLYS, DWiseFamily, clmul_mod, field


def gf_rank(F, rows):
    """Rank over GF(2^w) by Gaussian elimination."""
    m = [list(map(int, r)) for r in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = int(F.inv(m[rank][c]))
        m[rank] = [int(F.mul(x, inv)) for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [a ^ int(F.mul(f, b)) for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("w", sorted(PRIMITIVE_POLYS))
def test_tables_match_shift_and_add(w):
    F = field(w)
    rng = np.random.default_rng(w)
    a = rng.integers(0, F.order, 300)
    b = rng.integers(0, F.order, 300)
    ref = [clmul_mod(int(x), int(y), w, F.poly) for x, y in zip(a, b)]
    assert F.mul(a, b).tolist() == ref


@given(st.integers(1, 12), st.data())
def test_field_axioms(w, data):
    F = field(w)
    x, y, z = (data.draw(st.integers(0, F.order - 1)) for _ in range(3))
    assert int(F.mul(x, F.add(y, z))) == int(F.add(F.mul(x, y), F.mul(x, z)))
    assert int(F.mul(F.mul(x, y), z)) == int(F.mul(x, F.mul(y, z)))
    assert int(F.mul(x, 1)) == x
    if x:
        assert int(F.mul(x, F.inv(x))) == 1
        assert int(F.pow(x, F.order - 1)) == 1


def test_zero_inverse_rejected():
    with pytest.raises(ZeroDivisionError):
        field(4).inv(0)


def test_unsupported_width():
    with pytest.raises(InputError):
        field(40)


def test_poly_eval_matches_naive():
    F = field(5)
    coeffs = [3, 0, 17, 9]
    for x in range(32):
        acc = 0
        for c in coeffs:
            acc = clmul_mod(acc, x, 5, F.poly) ^ c
        assert int(F.poly_eval(coeffs, x)) == acc


def test_seed_round_trip():
    fam = DWiseFamily(gamma=6, beta=2, d=4)
    coeffs = [5, 0, 63, 1]
    assert fam.coefficients(fam.seed_of(coeffs)) == coeffs


def test_one_bit_marginal_is_half():
    fam = DWiseFamily(gamma=3, beta=1, d=2)
    seeds = range(1 << fam.seed_bits)
    hits = sum(int(fam.hash(s, [5])[0] == 0) for s in seeds)
    assert hits * 2 == 1 << fam.seed_bits


def test_zero_polynomial_keeps_everything():
    fam = DWiseFamily(gamma=5, beta=3, d=4)
    assert fam.zero_set(0, 20).tolist() == list(range(20))


@pytest.mark.parametrize("gamma,d", [(2, 2), (3, 2), (2, 3), (3, 3), (2, 4)])
def test_exhaustive_joint_uniformity(gamma, d):
    fam = DWiseFamily(gamma=gamma, beta=gamma, d=d)
    seeds = np.arange(1 << fam.seed_bits)
    coeffs = [((seeds >> (fam.width * (d - 1 - j))) & ((1 << fam.width) - 1))[:, None] for j in range(d)]
    pts = np.arange(1 << gamma)
    vals = fam.field.poly_eval(coeffs, pts[None, :])
    for tup in itertools.permutations(range(1 << gamma), d):
        joint = np.zeros(len(seeds), dtype=np.int64)
        for x in tup:
            joint = (joint << gamma) | vals[:, x]
        counts = np.bincount(joint, minlength=1 << (gamma * d))
        assert counts.min() == counts.max() == 1


@given(st.integers(3, 10), st.data())
def test_evaluation_map_is_invertible(gamma, data):
    """The seed -> (h(x_1)..h(x_d)) map is GF-linear; full rank means exact uniformity."""
    d = 4
    fam = DWiseFamily(gamma=gamma, beta=gamma, d=d)
    xs = data.draw(st.lists(st.integers(0, (1 << gamma) - 1), min_size=d, max_size=d, unique=True))
    basis = [fam.seed_of([int(i == j) for j in range(d)]) for i in range(d)]
    rows = [fam.values(s, xs) for s in basis]
    assert gf_rank(fam.field, rows) == d
    # linearity: values(a + b) = values(a) ^ values(b) coefficient-wise
    a = fam.seed_of([1, 2, 3, 4])
    b = fam.seed_of([7, 0, 1, 6])
    c = fam.seed_of([1 ^ 7, 2, 3 ^ 1, 4 ^ 6])
    assert (fam.values(a, xs) ^ fam.values(b, xs)).tolist() == fam.values(c, xs).tolist()
