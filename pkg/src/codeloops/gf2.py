"""Bit-packed linear algebra over GF(2).

Vectors are Python ints: coordinate ``i`` (1-based) of ``u`` is bit ``i - 1``,
so the integer value of a vector is its truth-table index
``enc(u) = sum u_i 2^(i-1)``.  Matrices are tuples of row ints and act on the
right, ``v -> vM``; row ``i`` of ``M`` is the image of ``e_{i+1}``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

BitMat = tuple  # tuple[int, ...], one int per row

MAX_DIM = 64


class SingularMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class BitVec:
    dim: int
    bits: int = 0

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"dimension {self.dim} outside 1..{MAX_DIM}")
        if self.bits >> self.dim:
            raise ValueError("bits set above the vector dimension")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> BitVec:
        bits = 0
        for i, c in enumerate(coords):
            if c & 1:
                bits |= 1 << i
        return cls(len(coords), bits)

    def coords(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.dim)]

    def _check(self, other: BitVec) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} != {other.dim}")

    def __and__(self, other: BitVec) -> BitVec:
        self._check(other)
        return BitVec(self.dim, self.bits & other.bits)

    def __xor__(self, other: BitVec) -> BitVec:
        self._check(other)
        return BitVec(self.dim, self.bits ^ other.bits)

    __add__ = __xor__

    def __int__(self) -> int:
        return self.bits


def hamming_weight(u: BitVec | int) -> int:
    """Number of nonzero coordinates of ``u``."""
    return int(u).bit_count()


def intersect(u: BitVec, v: BitVec) -> BitVec:
    """Coordinatewise product ``u ∩ v``."""
    return u & v


def parity(x: int) -> int:
    return x.bit_count() & 1


# -- matrices ---------------------------------------------------------------

def identity(d: int) -> BitMat:
    return tuple(1 << i for i in range(d))


def is_identity(m: BitMat) -> bool:
    return all(r == 1 << i for i, r in enumerate(m))


def vec_mat(v: int, m: BitMat) -> int:
    """Row vector times matrix."""
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= m[i]
        v >>= 1
        i += 1
    return out


def mat_mul(a: BitMat, b: BitMat) -> BitMat:
    """``a @ b``; as right actions, apply ``a`` then ``b``."""
    return tuple(vec_mat(r, b) for r in a)


def transpose(m: BitMat, ncols: int | None = None) -> BitMat:
    if ncols is None:
        ncols = len(m)
    out = []
    for j in range(ncols):
        col = 0
        for i, r in enumerate(m):
            if (r >> j) & 1:
                col |= 1 << i
        out.append(col)
    return tuple(out)


def rank(rows: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                break
    return len(basis)


def mat_inv(m: BitMat) -> BitMat:
    """Inverse by Gauss-Jordan elimination on ``[M | I]``.

    Raises SingularMatrixError when ``rank(M) < dim``.
    """
    d = len(m)
    rows = [(r, 1 << i) for i, r in enumerate(m)]
    for col in range(d):
        piv = None
        for i in range(col, d):
            if (rows[i][0] >> col) & 1:
                piv = i
                break
        if piv is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        rows[col], rows[piv] = rows[piv], rows[col]
        pr, pi = rows[col]
        for i in range(d):
            if i != col and (rows[i][0] >> col) & 1:
                rows[i] = (rows[i][0] ^ pr, rows[i][1] ^ pi)
    return tuple(r[1] for r in rows)


def is_invertible(m: BitMat) -> bool:
    return rank(m) == len(m)


def random_invertible(d: int, rng: random.Random) -> BitMat:
    while True:
        m = tuple(rng.getrandbits(d) for _ in range(d))
        if is_invertible(m):
            return m


def permutation_matrix(perm: Sequence[int]) -> BitMat:
    """Matrix sending ``e_{i+1}`` to ``e_{perm[i]+1}``."""
    return tuple(1 << p for p in perm)


def gl_order(d: int) -> int:
    order = 1
    for i in range(d):
        order *= (1 << d) - (1 << i)
    return order


def gl_generators(d: int) -> list[BitMat]:
    """A d-cycle of coordinates and one transvection, plus their inverses."""
    if d < 1:
        raise ValueError("d must be positive")
    if d == 1:
        return [identity(1)]
    cycle = permutation_matrix([(i + 1) % d for i in range(d)])
    transvection = (0b11,) + identity(d)[1:]
    gens = [cycle, transvection]
    return gens + [mat_inv(g) for g in gens]


# -- affine systems ---------------------------------------------------------

@dataclass
class AffineSystem:
    """Rows ``(coeffs, rhs)`` meaning ``parity(coeffs & x) == rhs``.

    ``rhs`` may be a multi-bit int: each bit is an independent right-hand
    side, which lets one elimination serve a whole family of systems that
    share the coefficient matrix.
    """
    num_vars: int
    rows: list[tuple[int, int]]

    def add(self, variables: Iterable[int], rhs: int) -> None:
        coeffs = 0
        for v in variables:
            coeffs ^= 1 << v
        self.rows.append((coeffs, rhs))


def _eliminate(rows: Iterable[tuple[int, int]]) -> tuple[dict[int, tuple[int, int]], int]:
    """Echelonize with the highest variable as pivot.

    Returns the pivot rows and the OR of rhs values left on zero rows
    (nonzero means inconsistent for the corresponding rhs bits).
    """
    pivots: dict[int, tuple[int, int]] = {}
    bad = 0
    for coeffs, rhs in rows:
        while coeffs:
            top = coeffs.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = (coeffs, rhs)
                break
            coeffs ^= p[0]
            rhs ^= p[1]
        else:
            bad |= rhs
    return pivots, bad


def _back_substitute(pivots: dict[int, tuple[int, int]], free: dict[int, int]) -> dict[int, int]:
    values: dict[int, int] = {}
    for top in sorted(pivots):
        coeffs, rhs = pivots[top]
        rest = coeffs ^ (1 << top)
        while rest:
            low = rest & -rest
            q = low.bit_length() - 1
            rhs ^= values[q] if q in values else free.get(q, 0)
            rest ^= low
        values[top] = rhs
    return values


def solve_affine_multi(sys: AffineSystem, free: dict[int, int] | None = None) -> list[int] | None:
    """Solve a system whose rhs values are bit-vectors.

    Returns ``x`` as a list of ints, one per variable, with
    ``x[j]`` holding the value of variable ``j`` for every rhs bit at once;
    None if some rhs bit is inconsistent.  Free variables take the values in
    ``free`` (default 0).
    """
    pivots, bad = _eliminate(sys.rows)
    if bad:
        return None
    free = free or {}
    values = _back_substitute(pivots, free)
    return [values[j] if j in values else free.get(j, 0) for j in range(sys.num_vars)]


def solve_affine(sys: AffineSystem) -> int | None:
    """One solution as a packed int (bit ``j`` = variable ``j``), or None."""
    x = solve_affine_multi(sys)
    if x is None:
        return None
    out = 0
    for j, v in enumerate(x):
        if v & 1:
            out |= 1 << j
    return out


def nullspace(rows: Sequence[int], nrows_dim: int) -> list[int]:
    """Basis of ``{v : v M = 0}`` where ``M`` has the given rows.

    ``nrows_dim`` is the number of rows (the dimension of ``v``).
    """
    work = [(r, 1 << i) for i, r in enumerate(rows)]
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for r, tag in work:
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = (r, tag)
                break
            pr, pt = pivots[top]
            r ^= pr
            tag ^= pt
        else:
            kernel.append(tag)
    assert len(kernel) + len(pivots) == nrows_dim
    return kernel


# -- bulk application -------------------------------------------------------

def chunk_tables(rows: Sequence[int], chunk: int = 8) -> list[np.ndarray]:
    """Lookup tables for applying a linear map to many packed vectors.

    ``rows[i]`` is the image of input bit ``i``.  Each table covers
    ``chunk`` consecutive input bits.
    """
    tables = []
    for start in range(0, len(rows), chunk):
        part = rows[start:start + chunk]
        t = np.zeros(1 << len(part), dtype=np.uint64)
        for i, r in enumerate(part):
            t[1 << i:2 << i] = t[:1 << i] ^ np.uint64(r)
        tables.append(t)
    return tables


def apply_tables(tables: Sequence[np.ndarray], xs: np.ndarray, chunk: int = 8) -> np.ndarray:
    xs = xs.astype(np.uint64, copy=False)
    out = np.zeros(xs.shape, dtype=np.uint64)
    mask = np.uint64((1 << chunk) - 1)
    for k, t in enumerate(tables):
        out ^= t[(xs >> np.uint64(k * chunk)) & mask]
    return out


def apply_linear_all(rows: Sequence[int], offset: int = 0) -> np.ndarray:
    """Images ``x M + offset`` of every ``x`` in ``0 .. 2^len(rows) - 1``."""
    n = len(rows)
    out = np.zeros(1 << n, dtype=np.uint64)
    for i, r in enumerate(rows):
        out[1 << i:2 << i] = out[:1 << i] ^ np.uint64(r)
    if offset:
        out ^= np.uint64(offset)
    return out


def random_invertible_batch(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random elements of GL(d, 2) as an ``(n, d)`` array of row ints."""
    out = np.empty((0, d), dtype=np.int64)
    while len(out) < n:
        m = rng.integers(0, 1 << d, size=(2 * n, d), dtype=np.int64)
        out = np.concatenate([out, m[batch_rank(m, d) == d]])
    return out[:n]


def batch_rank(m: np.ndarray, d: int) -> np.ndarray:
    """Rank of each matrix in a stack of row-int matrices."""
    work = m.copy()
    n, nrows = work.shape
    ranks = np.zeros(n, dtype=np.int64)
    used = np.zeros((n, nrows), dtype=bool)
    idx = np.arange(n)
    for col in range(d):
        bit = ((work >> col) & 1).astype(bool) & ~used
        has = bit.any(axis=1)
        piv = np.argmax(bit, axis=1)
        prow = work[idx, piv]
        hit = ((work >> col) & 1).astype(bool) & has[:, None]
        hit[idx, piv] = False
        work ^= np.where(hit, prow[:, None], 0)
        used[idx[has], piv[has]] = True
        ranks += has
    return ranks
