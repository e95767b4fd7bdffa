"""The action of GL(d, 2) on the parameter space.

For ``S`` with inverse ``T = (t_ij)`` the transformed map is
``f^S(v) = f(v T)``, and in coordinates

    omega3' = omega3 N3
    omega2' = omega2 N2 + nu2(omega3)
    omega1' = omega1 N1 + nu1(omega2, omega3)

``N3`` and ``N2`` are the third and second compound matrices of ``T`` (a
permanent equals a determinant in characteristic 2) and ``N1`` is ``T``
transposed.  All matrices here are stored as row ints: row ``r`` is the image
of the ``r``-th input basis vector, so applying a matrix is an XOR of rows.
The same convention is used for ``nu1``/``nu2``, which are linear in their
arguments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import gf2
from .gf2 import BitMat, mat_inv, transpose
from .polarization import (ParamVector, SquareMap, TriForm, form_tensor, map_table,
                           params_from_map, subsets)


def _pack_rows(m: np.ndarray) -> tuple[int, ...]:
    packed = np.packbits(m.astype(np.uint8), axis=1, bitorder="little")
    return tuple(int.from_bytes(r.tobytes(), "little") for r in packed)


@lru_cache(maxsize=None)
def _idx(d: int, k: int) -> np.ndarray:
    s = subsets(d, k)
    return np.array(s, dtype=np.intp).reshape(len(s), k)


def _xor_rows(rows: tuple[int, ...], x: int) -> int:
    out = 0
    b = 0
    while x:
        if x & 1:
            out ^= rows[b]
        x >>= 1
        b += 1
    return out


@dataclass(frozen=True, eq=False)
class ActionData:
    """Precomputed coordinates of the action of one group element."""
    element: BitMat
    tinv: BitMat
    _t: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.element)

    @cached_property
    def n1(self) -> tuple[int, ...]:
        return transpose(self.tinv, self.dim)

    @cached_property
    def n2(self) -> tuple[int, ...]:
        t = self._t
        I = _idx(self.dim, 2)
        U = _idx(self.dim, 2)
        u, v = U[None, :, 0], U[None, :, 1]
        i, j = I[:, None, 0], I[:, None, 1]
        m = (t[u, i] & t[v, j]) ^ (t[u, j] & t[v, i])
        return _pack_rows(m)

    @cached_property
    def n3(self) -> tuple[int, ...]:
        t = self._t
        I = _idx(self.dim, 3)
        U = _idx(self.dim, 3)
        u, v, w = (U[None, :, r] for r in range(3))
        i, j, k = (I[:, None, r] for r in range(3))
        m = (t[u, i] & t[v, j] & t[w, k]) ^ (t[u, i] & t[v, k] & t[w, j]) \
            ^ (t[u, j] & t[v, i] & t[w, k]) ^ (t[u, j] & t[v, k] & t[w, i]) \
            ^ (t[u, k] & t[v, i] & t[w, j]) ^ (t[u, k] & t[v, j] & t[w, i])
        return _pack_rows(m)

    @cached_property
    def nu2(self) -> tuple[int, ...]:
        """Rows indexed by triples ``ijk``, columns by pairs ``uv``."""
        t = self._t
        I = _idx(self.dim, 3)
        U = _idx(self.dim, 2)
        u, v = U[None, :, 0], U[None, :, 1]
        i, j, k = (I[:, None, r] for r in range(3))
        m = (t[u, i] & t[u, j] & t[v, k]) ^ (t[u, i] & t[u, k] & t[v, j]) \
            ^ (t[u, j] & t[u, k] & t[v, i]) ^ (t[u, i] & t[v, j] & t[v, k]) \
            ^ (t[u, j] & t[v, i] & t[v, k]) ^ (t[u, k] & t[v, i] & t[v, j])
        return _pack_rows(m)

    @cached_property
    def nu1_2(self) -> tuple[int, ...]:
        """Dependence of ``nu1`` on ``omega2``: rows by pairs, columns by ``u``."""
        t = self._t
        I = _idx(self.dim, 2)
        m = (t[:, I[:, 0]] & t[:, I[:, 1]]).T
        return _pack_rows(m)

    @cached_property
    def nu1_3(self) -> tuple[int, ...]:
        t = self._t
        I = _idx(self.dim, 3)
        m = (t[:, I[:, 0]] & t[:, I[:, 1]] & t[:, I[:, 2]]).T
        return _pack_rows(m)

    def nu1(self, c: int, a: int) -> int:
        return _xor_rows(self.nu1_2, c) ^ _xor_rows(self.nu1_3, a)


def _bits_matrix(m: BitMat, d: int) -> np.ndarray:
    return ((np.array(m, dtype=np.int64)[:, None] >> np.arange(d)) & 1).astype(np.uint8)


def build_action(S: BitMat) -> ActionData:
    """Action data of ``S`` (raises SingularMatrixError for singular ``S``)."""
    tinv = mat_inv(S)
    return ActionData(tuple(S), tinv, _bits_matrix(tinv, len(S)))


def build_action_transposed(S: BitMat) -> ActionData:
    """Action data of the twisted action ``f -> (v -> f(v S^t))``.

    This is the ordinary action of ``S^{-t}``; ``element`` records ``S``.
    """
    st = transpose(S)
    mat_inv(S)  # singularity check
    return ActionData(tuple(S), st, _bits_matrix(st, len(S)))


def act3(ad: ActionData, a: TriForm | int) -> TriForm | int:
    if isinstance(a, TriForm):
        return TriForm(a.dim, _xor_rows(ad.n3, a.bits))
    return _xor_rows(ad.n3, a)


def act2(ad: ActionData, c: int, a: TriForm | int) -> int:
    a = a.bits if isinstance(a, TriForm) else a
    return _xor_rows(ad.n2, c) ^ _xor_rows(ad.nu2, a)


def act1(ad: ActionData, p: int, c: int, a: TriForm | int) -> int:
    a = a.bits if isinstance(a, TriForm) else a
    return _xor_rows(ad.n1, p) ^ ad.nu1(c, a)


def act_full(ad: ActionData, omega: ParamVector) -> ParamVector:
    a = omega.omega3
    return ParamVector(omega.dim, act1(ad, omega.omega1, omega.omega2, a),
                       act2(ad, omega.omega2, a), act3(ad, a))


def act_pointwise(S: BitMat, omega: ParamVector, transposed: bool = False) -> ParamVector:
    """Independent route: transform the truth table pointwise and re-read
    the parameters.  ``f^S(v) = f(v S^{-1})`` (or ``f(v S^t)``)."""
    d = omega.dim
    t = transpose(S) if transposed else mat_inv(S)
    f = map_table(omega)
    images = gf2.apply_linear_all(t).astype(np.int64)
    return params_from_map(SquareMap(d, f[images]))


# -- bulk images over whole strata -----------------------------------------

def stratum3_images(ad: ActionData) -> np.ndarray:
    """``a N3`` for every ``a`` in ``Omega_d[3]``."""
    return gf2.apply_linear_all(ad.n3)


def stratum2_images(ad: ActionData, a: int) -> np.ndarray:
    """``c N2 + nu2(a)`` for every ``c`` in ``Omega_d[2]``."""
    return gf2.apply_linear_all(ad.n2, _xor_rows(ad.nu2, a))


def stratum1_images(ad: ActionData, c: int, a: int) -> np.ndarray:
    return gf2.apply_linear_all(ad.n1, ad.nu1(c, a))


def form_images_batch(tinv_rows: np.ndarray, a: TriForm) -> np.ndarray:
    """``A^S`` for a stack of inverses ``T = S^{-1}`` given as row ints.

    Returns packed form codes; used for mass sampling where building one
    ActionData per element would be too slow.
    """
    d = a.dim
    n = len(tinv_rows)
    t = ((tinv_rows[:, :, None] >> np.arange(d)) & 1).astype(np.int32)  # (n, u, i)
    w = form_tensor(a).astype(np.int32)
    # f3(t_u, t_v, t_w) = sum t_ui t_vj t_wk W_ijk, contracted one index at a time
    x = np.einsum("nwk,ijk->nwij", t, w) & 1
    y = np.einsum("nvj,nwij->nvwi", t, x) & 1
    z = np.einsum("nui,nvwi->nuvw", t, y) & 1
    U = _idx(d, 3)
    vals = z[:, U[:, 0], U[:, 1], U[:, 2]].astype(np.uint64)
    shifts = np.arange(len(U), dtype=np.uint64)
    return (vals << shifts).sum(axis=1, dtype=np.uint64) if n else np.zeros(0, np.uint64)

