"""Derived forms and the parameter space of squaring maps.

A map ``f: F_2^d -> F_2`` with ``f(0) = 0`` and vanishing fourth derived form
is determined by the values of ``f``, ``f_2`` and ``f_3`` on basis vectors.
Those values are packed into a :class:`ParamVector`; each stratum is an int
whose bit ``b`` is the ``b``-th subset of the given size in lexicographic
order (so ``{1,2,3}`` is bit 0 of ``omega3``).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np


class F4NotZero(ValueError):
    """The map has a nonzero fourth derived form."""


class FormSyntaxError(ValueError):
    pass


@lru_cache(maxsize=None)
def subsets(d: int, k: int) -> tuple[tuple[int, ...], ...]:
    """``k``-subsets of ``{0..d-1}`` in lexicographic order."""
    return tuple(combinations(range(d), k))


@lru_cache(maxsize=None)
def subset_index(d: int, k: int) -> dict[tuple[int, ...], int]:
    return {s: i for i, s in enumerate(subsets(d, k))}


@lru_cache(maxsize=None)
def subset_masks(d: int, k: int) -> tuple[int, ...]:
    """Vector ``sum_{i in I} e_i`` for each ``k``-subset ``I``."""
    return tuple(sum(1 << i for i in s) for s in subsets(d, k))


def omega_dim(d: int) -> int:
    return d + comb(d, 2) + comb(d, 3)


@dataclass(frozen=True, order=True)
class TriForm:
    dim: int
    bits: int = 0

    def __post_init__(self):
        if self.bits >> comb(self.dim, 3):
            raise ValueError("form bits exceed C(d, 3)")

    def __str__(self) -> str:
        return format_form(self)

    def triples(self) -> list[tuple[int, int, int]]:
        """Set triples, 0-based."""
        return [s for i, s in enumerate(subsets(self.dim, 3)) if (self.bits >> i) & 1]


@dataclass(frozen=True)
class ParamVector:
    dim: int
    omega1: int = 0
    omega2: int = 0
    omega3: int = 0

    def __post_init__(self):
        d = self.dim
        if self.omega1 >> d or self.omega2 >> comb(d, 2) or self.omega3 >> comb(d, 3):
            raise ValueError("parameter bits exceed stratum size")

    def encode(self) -> int:
        """Single int with the strata in the order omega1, omega2, omega3
        from the least significant bit up.  Comparing codes therefore compares
        omega3 first."""
        d = self.dim
        return self.omega1 | (self.omega2 << d) | (self.omega3 << (d + comb(d, 2)))

    @classmethod
    def decode(cls, d: int, code: int) -> ParamVector:
        n2 = comb(d, 2)
        return cls(d, code & ((1 << d) - 1), (code >> d) & ((1 << n2) - 1), code >> (d + n2))

    @property
    def form(self) -> TriForm:
        return TriForm(self.dim, self.omega3)

    @classmethod
    def random(cls, d: int, rng: random.Random) -> ParamVector:
        return cls(d, rng.getrandbits(d), rng.getrandbits(comb(d, 2)), rng.getrandbits(comb(d, 3)))

    @classmethod
    def from_sets(cls, d: int, omega1: Sequence[int] = (), omega2: Sequence[str] = (),
                  omega3: str | TriForm = "0") -> ParamVector:
        """Build from 1-based labels: ``omega1=[1, 3]``, ``omega2=["12"]``,
        ``omega3="123+145"``."""
        p1 = 0
        for i in omega1:
            if not 1 <= int(i) <= d:
                raise ValueError(f"index {i} out of range 1..{d}")
            p1 |= 1 << (int(i) - 1)
        idx2 = subset_index(d, 2)
        p2 = 0
        for tok in omega2:
            pair = _parse_token(str(tok), d, 2)
            p2 |= 1 << idx2[pair]
        a = omega3 if isinstance(omega3, TriForm) else parse_form(omega3, d)
        return cls(d, p1, p2, a.bits)

    def to_sets(self) -> dict:
        d = self.dim
        return {
            "omega1": [i + 1 for i in range(d) if (self.omega1 >> i) & 1],
            "omega2": ["".join(str(i + 1) for i in s)
                       for b, s in enumerate(subsets(d, 2)) if (self.omega2 >> b) & 1],
            "omega3": format_form(self.form),
        }


@dataclass(frozen=True)
class SquareMap:
    """Truth table of ``f``; ``table[u]`` is ``f(u)`` for the vector with
    integer code ``u``."""
    dim: int
    table: np.ndarray

    def __post_init__(self):
        if self.table.shape != (1 << self.dim,):
            raise ValueError("truth table must have 2^d entries")
        if self.table[0]:
            raise ValueError("f(0) must be 0")

    def __call__(self, u: int) -> int:
        return int(self.table[u])

    def __eq__(self, other) -> bool:
        return isinstance(other, SquareMap) and self.dim == other.dim and \
            bool(np.array_equal(self.table, other.table))

    __hash__ = None


# -- derived forms ----------------------------------------------------------

def derived_form(f: SquareMap, m: int, vs: Sequence[int]) -> int:
    """``f_m(v_1..v_m)``: the sum of ``f`` over all nonempty subsums (mod 2)."""
    if m < 1 or len(vs) != m:
        raise ValueError("need exactly m >= 1 vectors")
    acc = 0
    for mask in range(1, 1 << m):
        s = 0
        for i in range(m):
            if (mask >> i) & 1:
                s ^= vs[i]
        acc ^= int(f.table[s])
    return acc


def anf(table: np.ndarray) -> np.ndarray:
    """Algebraic normal form coefficients (binary Moebius transform)."""
    a = table.astype(np.uint8).copy()
    n = a.shape[0]
    step = 1
    while step < n:
        a = a.reshape(-1, 2, step)
        a[:, 1, :] ^= a[:, 0, :]
        a = a.reshape(n)
        step <<= 1
    return a


@lru_cache(maxsize=None)
def _popcounts(d: int) -> np.ndarray:
    x = np.arange(1 << d, dtype=np.uint32)
    c = np.zeros_like(x)
    for i in range(d):
        c += (x >> i) & 1
    return c


def check_f4_zero(f: SquareMap) -> bool:
    """True iff the fourth derived form of ``f`` vanishes identically.

    ``f_{m+1}`` is zero exactly when ``f`` has algebraic degree at most ``m``,
    so this inspects the algebraic normal form, which is exact for every d.
    """
    coeffs = anf(f.table)
    return not bool(coeffs[_popcounts(f.dim) >= 4].any())


def f4_vanishes_on(f: SquareMap, quadruples: np.ndarray) -> bool:
    """Evaluate ``f_4`` directly on an ``(n, 4)`` array of vectors."""
    t = f.table
    acc = np.zeros(len(quadruples), dtype=np.uint8)
    for mask in range(1, 16):
        s = np.zeros(len(quadruples), dtype=np.int64)
        for i in range(4):
            if (mask >> i) & 1:
                s ^= quadruples[:, i]
        acc ^= t[s]
    return not bool(acc.any())


def f4_sample_check(f: SquareMap, samples: int = 10_000, seed: int = 0) -> bool:
    """Sampled check: all quadruples for d <= 4, otherwise basis quadruples
    plus ``samples`` seeded random quadruples."""
    d = f.dim
    if d <= 4:
        n = 1 << d
        g = np.indices((n, n, n, n)).reshape(4, -1).T
        return f4_vanishes_on(f, g)
    basis = np.array([[1 << i for i in q] for q in combinations(range(d), 4)], dtype=np.int64)
    rng = np.random.default_rng(seed)
    rand = rng.integers(0, 1 << d, size=(samples, 4), dtype=np.int64)
    return f4_vanishes_on(f, basis) and f4_vanishes_on(f, rand)


def params_from_map(f: SquareMap) -> ParamVector:
    """Values of ``f``, ``f_2``, ``f_3`` on basis vectors."""
    if not check_f4_zero(f):
        raise F4NotZero("f_4 is not identically zero")
    d = f.dim
    t = f.table
    p1 = 0
    for i in range(d):
        if t[1 << i]:
            p1 |= 1 << i
    p2 = 0
    for b, (i, j) in enumerate(subsets(d, 2)):
        x, y = 1 << i, 1 << j
        if t[x ^ y] ^ t[x] ^ t[y]:
            p2 |= 1 << b
    p3 = 0
    for b, (i, j, k) in enumerate(subsets(d, 3)):
        x, y, z = 1 << i, 1 << j, 1 << k
        v = (t[x ^ y ^ z] ^ t[x ^ y] ^ t[x ^ z] ^ t[y ^ z] ^ t[x] ^ t[y] ^ t[z])
        if v:
            p3 |= 1 << b
    return ParamVector(d, p1, p2, p3)


def map_table(omega: ParamVector) -> np.ndarray:
    """Truth table of the cubic polynomial with coefficients ``omega``."""
    d = omega.dim
    x = np.arange(1 << d, dtype=np.int64)
    out = np.zeros(1 << d, dtype=np.uint8)
    for k, bits in ((1, omega.omega1), (2, omega.omega2), (3, omega.omega3)):
        for b, mask in enumerate(subset_masks(d, k)):
            if (bits >> b) & 1:
                out ^= ((x & mask) == mask).astype(np.uint8)
    return out


def map_from_params(omega: ParamVector) -> SquareMap:
    return SquareMap(omega.dim, map_table(omega))


# -- explicit f_2, f_3 ------------------------------------------------------

def eval_f3(omega: ParamVector | TriForm, x: int, y: int, z: int) -> int:
    """Trilinear alternating form with coefficients ``omega3``."""
    if isinstance(omega, ParamVector):
        d, bits = omega.dim, omega.omega3
    else:
        d, bits = omega.dim, omega.bits
    acc = 0
    b = 0
    trip = subsets(d, 3)
    while bits:
        if bits & 1:
            i, j, k = trip[b]
            xi, xj, xk = (x >> i) & 1, (x >> j) & 1, (x >> k) & 1
            yi, yj, yk = (y >> i) & 1, (y >> j) & 1, (y >> k) & 1
            zi, zj, zk = (z >> i) & 1, (z >> j) & 1, (z >> k) & 1
            acc ^= (xi & ((yj & zk) ^ (yk & zj))) ^ (xj & ((yi & zk) ^ (yk & zi))) \
                ^ (xk & ((yi & zj) ^ (yj & zi)))
        bits >>= 1
        b += 1
    return acc


def eval_f2(omega: ParamVector, x: int, y: int) -> int:
    """Second derived form of ``map_from_params(omega)``, in closed form."""
    d = omega.dim
    acc = 0
    for b, (i, j) in enumerate(subsets(d, 2)):
        if (omega.omega2 >> b) & 1:
            acc ^= (((x >> i) & (y >> j)) ^ ((x >> j) & (y >> i))) & 1
    for b, (i, j, k) in enumerate(subsets(d, 3)):
        if (omega.omega3 >> b) & 1:
            xi, xj, xk = (x >> i) & 1, (x >> j) & 1, (x >> k) & 1
            yi, yj, yk = (y >> i) & 1, (y >> j) & 1, (y >> k) & 1
            acc ^= (xi & xj & yk) ^ (xi & xk & yj) ^ (xj & xk & yi) \
                ^ (xi & yj & yk) ^ (xj & yi & yk) ^ (xk & yi & yj)
    return acc


def form_tensor(a: TriForm) -> np.ndarray:
    """Alternating ``d x d x d`` 0/1 tensor of the form."""
    d = a.dim
    w = np.zeros((d, d, d), dtype=np.uint8)
    for i, j, k in a.triples():
        for p in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
            w[p] = 1
    return w


def slice_rows(a: TriForm) -> list[int]:
    """For each basis vector ``e_i`` the bilinear form ``A(e_i, ., .)``
    packed over pairs ``j < k``."""
    d = a.dim
    idx2 = subset_index(d, 2)
    rows = [0] * d
    for i, j, k in a.triples():
        rows[i] ^= 1 << idx2[(j, k)]
        rows[j] ^= 1 << idx2[(i, k)]
        rows[k] ^= 1 << idx2[(i, j)]
    return rows


# -- compact notation -------------------------------------------------------

_TOKEN = re.compile(r"[1-9]+")


def _parse_token(tok: str, d: int, k: int) -> tuple[int, ...]:
    if len(tok) != k or not _TOKEN.fullmatch(tok):
        raise FormSyntaxError(f"malformed token {tok!r}")
    digits = [int(c) for c in tok]
    if any(c > d for c in digits):
        raise FormSyntaxError(f"digit out of range 1..{d} in {tok!r}")
    if len(set(digits)) != k:
        raise FormSyntaxError(f"repeated digit in {tok!r}")
    if digits != sorted(digits):
        raise FormSyntaxError(f"token {tok!r} is not increasing")
    return tuple(c - 1 for c in digits)


def parse_form(text: str, d: int) -> TriForm:
    """Parse ``"123+145"`` style notation; ``"0"`` is the zero form."""
    if not 1 <= d <= 9:
        raise ValueError("compact notation supports 1 <= d <= 9")
    text = text.strip().replace("{+}", "+").replace(" ", "")
    if text in ("0", "", "∅"):
        return TriForm(d, 0)
    idx = subset_index(d, 3)
    bits = 0
    for tok in text.split("+"):
        b = idx[_parse_token(tok, d, 3)]
        if (bits >> b) & 1:
            raise FormSyntaxError(f"duplicate token {tok!r}")
        bits |= 1 << b
    return TriForm(d, bits)


def format_form(a: TriForm) -> str:
    if not a.bits:
        return "0"
    return "+".join("".join(str(i + 1) for i in t) for t in a.triples())
