"""Binary extension fields GF(2^w) and the polynomial d-wise independent hash family."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError

# Primitive polynomials (bit i = coefficient of x^i), so x generates the multiplicative group.
PRIMITIVE_POLYS = {
    1: 0b11,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
}
MAX_WIDTH = max(PRIMITIVE_POLYS)


def clmul_mod(a: int, b: int, width: int, poly: int) -> int:
    """Shift-and-add product in GF(2^width); slow reference for the tables."""
    out = 0
    top = 1 << width
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return out


class GF2Field:
    """GF(2^width) with log/antilog tables; all operations accept numpy arrays."""

    def __init__(self, width: int):
        if width not in PRIMITIVE_POLYS:
            raise InputError(f"field width must be in 1..{MAX_WIDTH}, got {width}")
        self.width = width
        self.order = 1 << width
        self.poly = PRIMITIVE_POLYS[width]
        group = self.order - 1
        exp = np.zeros(2 * group, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(group):
            exp[i] = x
            log[x] = i
            x = clmul_mod(x, 2 if width > 1 else 1, width, self.poly)
            if x == 1 and i < group - 1:
                raise InputError(f"polynomial {self.poly:#x} is not primitive")
        exp[group:] = exp[:group]
        self._exp = exp
        self._log = log
        self._group = group

    def __repr__(self) -> str:
        return f"GF2Field(width={self.width})"

    def add(self, a, b):
        return np.bitwise_xor(a, b)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse in GF(2^w)")
        return self._exp[(self._group - self._log[a]) % self._group]

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, self._exp[(self._log[a] * e) % self._group])

    def poly_eval(self, coeffs_high_first, x):
        """Horner evaluation; ``coeffs_high_first`` may be scalars or broadcastable arrays."""
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros(np.broadcast(x, np.asarray(coeffs_high_first[0])).shape, dtype=np.int64)
        for c in coeffs_high_first:
            acc = self.mul(acc, x) ^ np.asarray(c, dtype=np.int64)
        return acc


@lru_cache(maxsize=None)
def field(width: int) -> GF2Field:
    return GF2Field(width)


def bits_for(count: int) -> int:
    """Bits needed to index ``count`` items (at least 1)."""
    return max(1, math.ceil(math.log2(count))) if count > 1 else 1


@dataclass(frozen=True)
class DWiseFamily:
    """h'(x) = low ``beta`` bits of a degree-(d-1) polynomial over GF(2^width).

    Inputs are universe indices below 2^gamma. The seed is the coefficient
    vector serialized high-degree first, each coefficient ``width`` bits
    MSB-first, so a seed prefix fixes the top coefficients.
    """

    gamma: int
    beta: int
    d: int

    def __post_init__(self):
        if self.d < 1 or self.gamma < 1 or self.beta < 0:
            raise InputError("need d >= 1, gamma >= 1, beta >= 0")
        if self.width > MAX_WIDTH:
            raise InputError(f"field width {self.width} exceeds the supported {MAX_WIDTH}")

    @classmethod
    def for_universe(cls, size: int, beta: int, d: int) -> "DWiseFamily":
        return cls(bits_for(size), beta, d)

    @property
    def width(self) -> int:
        return max(self.gamma, self.beta)

    @property
    def field(self) -> GF2Field:
        return field(self.width)

    @property
    def seed_bits(self) -> int:
        return self.d * self.width

    def coefficients(self, seed: int) -> list[int]:
        """Coefficients high-degree first."""
        w = self.width
        mask = (1 << w) - 1
        return [(seed >> (w * (self.d - 1 - j))) & mask for j in range(self.d)]

    def seed_of(self, coeffs_high_first) -> int:
        s = 0
        for c in coeffs_high_first:
            s = (s << self.width) | int(c)
        return s

    def values(self, seed: int, xs) -> np.ndarray:
        """Full field values of the polynomial at ``xs``."""
        return self.field.poly_eval(self.coefficients(seed), xs)

    def hash(self, seed: int, xs) -> np.ndarray:
        return self.values(seed, xs) & ((1 << self.beta) - 1)

    def zero_set(self, seed: int, size: int) -> np.ndarray:
        """Indices in ``[0, size)`` whose hash is zero."""
        xs = np.arange(size, dtype=np.int64)
        return xs[self.hash(seed, xs) == 0]
