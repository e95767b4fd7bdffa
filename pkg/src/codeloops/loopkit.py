"""Code loops as explicit Cayley tables.

Elements of ``Q(Z, V, theta)`` are encoded as ``a * 2^d + u`` with ``a`` in
``Z = F_2`` and ``u`` in ``V`` (the truth-table index), so the identity is 0
and the central element is ``2^d``.  Multiplication is
``(a, u)(b, v) = (a + b + theta(u, v), u + v)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path

import numpy as np

from . import gf2
from .polarization import ParamVector, subset_masks, subsets

MAX_SOLVER_DIM = 6
EXHAUSTIVE_MOUFANG_LIMIT = 256


class NotALoop(ValueError):
    pass


class NotDoublyEven(ValueError):
    pass


class EncodingError(ValueError):
    """Extracted squaring/commutator/associator data are not well defined."""


@dataclass(frozen=True, eq=False)
class FactorSet:
    dim: int
    table: np.ndarray  # (2^d, 2^d) uint8, entry [u, v] = theta(u, v)

    def __post_init__(self):
        n = 1 << self.dim
        if self.table.shape != (n, n):
            raise ValueError("factor set table has the wrong shape")
        if self.table[0].any() or self.table[:, 0].any():
            raise ValueError("theta(0, u) and theta(u, 0) must vanish")


@dataclass(frozen=True, eq=False)
class LoopTable:
    order: int
    table: np.ndarray  # (n, n) ints, entry [i, j] = i * j

    @property
    def dim(self) -> int:
        return self.order.bit_length() - 2

    def __eq__(self, other) -> bool:
        return isinstance(other, LoopTable) and np.array_equal(self.table, other.table)


@dataclass(frozen=True)
class CodeSpec:
    length: int
    generators: tuple[int, ...]  # bit i-1 = coordinate i

    def __post_init__(self):
        if gf2.rank(self.generators) != len(self.generators):
            raise ValueError("code generators are linearly dependent")
        for g in self.generators:
            if g >> self.length:
                raise ValueError("generator longer than the code length")

    @property
    def dim(self) -> int:
        return len(self.generators)

    def codewords(self) -> list[int]:
        words = [0]
        for g in self.generators:
            words += [w ^ g for w in words]
        return words


# -- factor sets ------------------------------------------------------------

def _coordinate_masks(d: int) -> np.ndarray:
    """``masks[u]`` has bit ``b`` set when the ``b``-th monomial of the
    encoded parameter vector is 1 at ``u``; so ``f(u) = parity(masks[u] & code)``."""
    u = np.arange(1 << d, dtype=np.int64)
    out = np.zeros(1 << d, dtype=np.int64)
    shift = 0
    for k in (1, 2, 3):
        for b, m in enumerate(subset_masks(d, k)):
            out |= ((u & m) == m).astype(np.int64) << (shift + b)
        shift += comb(d, k)
    return out


@lru_cache(maxsize=None)
def _solver(d: int) -> tuple[dict, int]:
    """Echelon form of the factor-set equations with symbolic right-hand
    sides.  Bit ``b`` of a rhs is the coefficient of the ``b``-th parameter
    coordinate; bit ``n`` (``n`` = number of coordinates) is the constant."""
    n = 1 << d
    m = n - 1
    fm = [int(x) for x in _coordinate_masks(d)]

    def var(u, v):
        return (u - 1) * m + (v - 1)

    rows = []
    for u in range(1, n):
        rows.append((1 << var(u, u), fm[u]))
        for v in range(u + 1, n):
            rows.append(((1 << var(u, v)) ^ (1 << var(v, u)), fm[u ^ v] ^ fm[u] ^ fm[v]))

    def term(u, v):
        return 1 << var(u, v) if u and v else 0

    for u in range(1, n):
        for v in range(1, n):
            for w in range(1, n):
                coeffs = term(u, v) ^ term(u ^ v, w) ^ term(v, w) ^ term(u, v ^ w)
                rhs = fm[u ^ v ^ w] ^ fm[u ^ v] ^ fm[u ^ w] ^ fm[v ^ w] ^ fm[u] ^ fm[v] ^ fm[w]
                rows.append((coeffs, rhs))
    pivots, bad = gf2._eliminate(rows)
    if bad:
        raise AssertionError("factor-set equations inconsistent for some parameters")
    return pivots, m * m


def solve_factor_set(omega: ParamVector, *, pin_seed: int | None = None) -> FactorSet:
    """A factor set with squaring map ``map_from_params(omega)``.

    Free variables are 0 by default; ``pin_seed`` sets them to seeded random
    bits instead, giving a different (equally valid) solution.
    """
    d = omega.dim
    if d > MAX_SOLVER_DIM:
        raise ValueError(f"linear factor-set solving is limited to d <= {MAX_SOLVER_DIM}")
    pivots, nvars = _solver(d)
    const = 1 << (d + comb(d, 2) + comb(d, 3))
    free = {}
    if pin_seed is not None:
        rng = random.Random(pin_seed)
        free = {j: const * rng.getrandbits(1) for j in range(nvars) if j not in pivots}
    values = gf2._back_substitute(pivots, free)
    masks = np.array([values[j] if j in values else free.get(j, 0) for j in range(nvars)],
                     dtype=np.uint64)
    code = np.uint64(omega.encode() | const)
    bits = _parity64(masks & code).reshape((1 << d) - 1, (1 << d) - 1)
    table = np.zeros((1 << d, 1 << d), dtype=np.uint8)
    table[1:, 1:] = bits
    return FactorSet(d, table)


def _parity64(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    for s in (32, 16, 8, 4, 2, 1):
        x ^= x >> np.uint64(s)
    return (x & np.uint64(1)).astype(np.uint8)


def explicit_factor_set(omega: ParamVector) -> FactorSet:
    """Closed-form factor set, usable in any dimension:

        theta(x, y) = sum_i x_i y_i w_i + sum_{i<j} x_j y_i w_ij
                      + sum_{i<j<k} (x_i x_j y_k + x_i x_k y_j + x_j x_k y_i) w_ijk
    """
    d = omega.dim
    u = np.arange(1 << d, dtype=np.int64)
    bit = [((u >> i) & 1).astype(np.uint8) for i in range(d)]
    table = np.zeros((1 << d, 1 << d), dtype=np.uint8)
    for i in range(d):
        if (omega.omega1 >> i) & 1:
            table ^= np.outer(bit[i], bit[i])
    for b, (i, j) in enumerate(subsets(d, 2)):
        if (omega.omega2 >> b) & 1:
            table ^= np.outer(bit[j], bit[i])
    for b, (i, j, k) in enumerate(subsets(d, 3)):
        if (omega.omega3 >> b) & 1:
            table ^= np.outer(bit[i] & bit[j], bit[k]) ^ np.outer(bit[i] & bit[k], bit[j]) \
                ^ np.outer(bit[j] & bit[k], bit[i])
    return FactorSet(d, table)


def check_factor_set(theta: FactorSet, omega: ParamVector) -> bool:
    """Exhaustive check of the three constraint families against ``omega``."""
    from .polarization import map_table
    d = theta.dim
    t = theta.table
    f = map_table(omega)
    u = np.arange(1 << d)
    if not np.array_equal(t[u, u], f):
        return False
    f2 = f[u[:, None] ^ u[None, :]] ^ f[:, None] ^ f[None, :]
    if not np.array_equal(t ^ t.T, f2):
        return False
    for x in range(1 << d):
        v, w = u[:, None], u[None, :]
        lhs = t[x, v] ^ t[x ^ v, w] ^ t[v, w] ^ t[x, v ^ w]
        f3 = f[x ^ v ^ w] ^ f[x ^ v] ^ f[x ^ w] ^ f[v ^ w] ^ f[x] ^ f[v] ^ f[w]
        if not np.array_equal(lhs, f3):
            return False
    return True


# -- loops ------------------------------------------------------------------

def build_loop(theta: FactorSet) -> LoopTable:
    d = theta.dim
    n = 2 << d
    idx = np.arange(n)
    a, u = idx >> d, idx & ((1 << d) - 1)
    z = a[:, None] ^ a[None, :] ^ theta.table[u[:, None], u[None, :]]
    dtype = np.uint8 if n <= 256 else np.uint16 if n <= 65536 else np.uint32
    table = ((z.astype(np.int64) << d) | (u[:, None] ^ u[None, :])).astype(dtype)
    return LoopTable(n, table)


def check_loop(t: LoopTable) -> None:
    """Raise NotALoop unless ``t`` is a Latin square with identity 0."""
    n = t.order
    m = t.table
    if m.shape != (n, n):
        raise NotALoop("table is not n x n")
    idx = np.arange(n)
    if not (np.array_equal(m[0], idx) and np.array_equal(m[:, 0], idx)):
        raise NotALoop("element 0 is not a two-sided identity")
    if not (np.array_equal(np.sort(m, axis=1), np.broadcast_to(idx, (n, n)))
            and np.array_equal(np.sort(m, axis=0), np.broadcast_to(idx[:, None], (n, n)))):
        raise NotALoop("table is not a Latin square")


def is_loop(t: LoopTable) -> bool:
    try:
        check_loop(t)
    except NotALoop:
        return False
    return True


@dataclass(frozen=True)
class MoufangResult:
    holds: bool
    method: str  # "exhaustive" or "sampled"
    checked: int

    def __bool__(self) -> bool:
        return self.holds


def is_moufang(t: LoopTable, *, samples: int = 10_000_000, seed: int = 0) -> MoufangResult:
    """``x(y(xz)) = ((xy)x)z``; exhaustive for order <= 256, sampled above."""
    check_loop(t)
    m = t.table.astype(np.int64)
    n = t.order
    if n <= EXHAUSTIVE_MOUFANG_LIMIT:
        for x in range(n):
            xz = m[x]                      # over z
            lhs = m[x][m[:, xz]]           # [y, z]: x(y(xz))
            xyx = m[m[x], x]               # over y: (xy)x
            rhs = m[xyx]                   # [y, z]
            if not np.array_equal(lhs, rhs):
                return MoufangResult(False, "exhaustive", (x + 1) * n * n)
        return MoufangResult(True, "exhaustive", n ** 3)
    rng = np.random.default_rng(seed)
    done = 0
    while done < samples:
        k = min(1 << 20, samples - done)
        x, y, z = rng.integers(0, n, size=(3, k))
        if not np.array_equal(m[x, m[y, m[x, z]]], m[m[m[x, y], x], z]):
            return MoufangResult(False, "sampled", done + k)
        done += k
    return MoufangResult(True, "sampled", done)


def is_associative(t: LoopTable) -> bool:
    m = t.table.astype(np.int64)
    for x in range(t.order):
        if not np.array_equal(m[m[x]], m[x][m]):  # (xy)z vs x(yz) over [y, z]
            return False
    return True


def is_commutative(t: LoopTable) -> bool:
    return bool(np.array_equal(t.table, t.table.T))


def element_orders(t: LoopTable) -> np.ndarray:
    """Orders of elements (powers taken by left multiplication)."""
    m = t.table.astype(np.int64)
    n = t.order
    out = np.zeros(n, dtype=np.int64)
    for x in range(n):
        p, k = x, 1
        while p != 0:
            p = m[p, x]
            k += 1
            if k > n:
                raise ValueError("element of unbounded order")
        out[x] = k
    return out


def _left_division(m: np.ndarray) -> np.ndarray:
    """``div[r, y]`` = the ``c`` with ``r * c = y``."""
    n = m.shape[0]
    div = np.empty_like(m)
    rows = np.arange(n)[:, None]
    div[rows, m] = np.arange(n)[None, :]
    return div


def extract_PCA(t: LoopTable, d: int | None = None) -> ParamVector:
    """Read squaring, commutator and associator data off a table.

    Every computed value must lie in the centre ``{0, 2^d}`` and must not
    depend on coset representatives; then ``P``, ``C`` and ``A`` on basis
    vectors give the parameter vector.
    """
    check_loop(t)
    if d is None:
        d = t.dim
    if t.order != 2 << d:
        raise EncodingError("order is not 2^(d+1)")
    m = t.table.astype(np.int64)
    n = t.order
    div = _left_division(m)
    z = 1 << d
    idx = np.arange(n)

    def centre_bit(vals: np.ndarray, what: str) -> np.ndarray:
        if np.any((vals != 0) & (vals != z)):
            raise EncodingError(f"{what} value outside the centre")
        return (vals >> d).astype(np.uint8)

    sq = centre_bit(m[idx, idx], "square")
    if not np.array_equal(sq[:z], sq[z:]):
        raise EncodingError("squares are not constant on cosets")
    comm = centre_bit(div[m.T, m], "commutator")   # (yx)^{-1}(xy) as left quotient
    if not (np.array_equal(comm[:z], comm[z:]) and np.array_equal(comm[:, :z], comm[:, z:])):
        raise EncodingError("commutators are not constant on cosets")
    basis = [1 << i for i in range(d)]
    p1 = sum(1 << i for i, e in enumerate(basis) if sq[e])
    p2 = 0
    for b, (i, j) in enumerate(subsets(d, 2)):
        if comm[basis[i], basis[j]]:
            p2 |= 1 << b
    p3 = 0
    for b, (i, j, k) in enumerate(subsets(d, 3)):
        x, y, w = basis[i], basis[j], basis[k]
        # (xy)w = (x(yw)) A
        assoc = int(div[m[x, m[y, w]], m[m[x, y], w]])
        if assoc not in (0, z):
            raise EncodingError("associator value outside the centre")
        for a, c in ((z, 0), (0, z), (z, z)):  # other coset representatives
            xx, yy = x | a, y | c
            if int(div[m[xx, m[yy, w]], m[m[xx, yy], w]]) != assoc:
                raise EncodingError("associators are not constant on cosets")
        if assoc:
            p3 |= 1 << b
    return ParamVector(d, p1, p2, p3)


def loop_from_params(omega: ParamVector, *, pin_seed: int | None = None) -> LoopTable:
    if omega.dim <= MAX_SOLVER_DIM:
        theta = solve_factor_set(omega, pin_seed=pin_seed)
    else:
        theta = explicit_factor_set(omega)
    return build_loop(theta)


# -- codes ------------------------------------------------------------------

def is_doubly_even(c: CodeSpec) -> bool:
    gens = c.generators
    for i, g in enumerate(gens):
        if gf2.hamming_weight(g) % 4:
            return False
        for h in gens[i + 1:]:
            if gf2.hamming_weight(g & h) % 2:
                return False
    if c.dim <= 16:
        return all(gf2.hamming_weight(w) % 4 == 0 for w in c.codewords())
    return True


def code_to_params(c: CodeSpec) -> ParamVector:
    """Parameters of the code loop with the generators as basis of ``V``."""
    if not is_doubly_even(c):
        raise NotDoublyEven("code has a word of weight not divisible by 4")
    g = c.generators
    d = c.dim
    w = gf2.hamming_weight
    p1 = sum(1 << i for i in range(d) if (w(g[i]) // 4) & 1)
    p2 = sum(1 << b for b, (i, j) in enumerate(subsets(d, 2)) if (w(g[i] & g[j]) // 2) & 1)
    p3 = sum(1 << b for b, (i, j, k) in enumerate(subsets(d, 3)) if w(g[i] & g[j] & g[k]) & 1)
    return ParamVector(d, p1, p2, p3)


def code_from_rows(rows: list[str]) -> CodeSpec:
    length = len(rows[0])
    gens = []
    for r in rows:
        if len(r) != length or set(r) - {"0", "1"}:
            raise ValueError(f"bad code row {r!r}")
        gens.append(sum(1 << i for i, ch in enumerate(r) if ch == "1"))
    return CodeSpec(length, tuple(gens))


def hamming_code() -> CodeSpec:
    """Extended Hamming [8, 4, 4] code."""
    return code_from_rows(["11110000", "00111100", "00001111", "01010101"])


def _icosahedron_adjacency() -> np.ndarray:
    phi = (1 + 5 ** 0.5) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (phi, -phi):
            pts += [(0, s1, s2), (s1, s2, 0), (s2, 0, s1)]
    p = np.array(pts)
    dist = np.linalg.norm(p[:, None] - p[None, :], axis=2)
    return (np.abs(dist - 2) < 1e-9).astype(np.uint8)


def golay_code() -> CodeSpec:
    """Extended binary Golay code ``[I | J - A]`` with ``A`` the icosahedron
    adjacency matrix; every generator has weight 8."""
    adj = _icosahedron_adjacency()
    rows = []
    for i in range(12):
        left = ["1" if j == i else "0" for j in range(12)]
        right = ["0" if adj[i, j] else "1" for j in range(12)]
        rows.append("".join(left + right))
    return code_from_rows(rows)


# -- file formats -----------------------------------------------------------

def write_table(t: LoopTable, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{t.order}\n")
        for row in t.table:
            fh.write(" ".join(map(str, row.tolist())) + "\n")


def read_table(path: str | Path) -> LoopTable:
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    n = int(lines[0][0])
    if len(lines) != n + 1 or any(len(r) != n for r in lines[1:]):
        raise NotALoop("table file does not have n rows of n entries")
    m = np.array(lines[1:], dtype=np.int64)
    if m.min() < 0 or m.max() >= n:
        raise NotALoop("table entries out of range")
    return LoopTable(n, m)


def read_code(path: str | Path) -> CodeSpec:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    length, dim = map(int, lines[0].split())
    rows = lines[1:]
    if len(rows) != dim or any(len(r) != length for r in rows):
        raise ValueError("code file does not match its header")
    return code_from_rows(rows)
