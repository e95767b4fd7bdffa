"""Published trilinear form representatives and cheap form invariants."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from . import gf2
from .gf2 import BitMat, identity, mat_inv, mat_mul
from .groupkit import BudgetExhausted
from .polarization import TriForm, format_form, parse_form, slice_rows


class Undecided(BudgetExhausted):
    """Equivalence search gave up; the forms may or may not be equivalent."""


@dataclass(frozen=True)
class CatalogueEntry:
    dim: int
    id: int
    form: TriForm
    text: str
    factors: str
    published_stabilizer_order: int
    published_c_orbits: int
    published_loops: int


@lru_cache(maxsize=None)
def published() -> dict:
    with resources.files("codeloops").joinpath("data/published.json").open() as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def catalogue(d: int) -> tuple[CatalogueEntry, ...]:
    """Table rows for dimension ``d`` (3 <= d <= 8), in published ID order."""
    rows = [r for r in published()["table2"] if r["dim"] == d]
    if not rows:
        raise KeyError(f"no published forms for d = {d}")
    return tuple(
        CatalogueEntry(d, r["id"], parse_form(r["form"], d), r["form"], r["factors"],
                       int(r["stabilizer_order"]), r["c_orbits"], r["loops"])
        for r in rows)


def expected_totals(d: int) -> tuple[int, int]:
    t1 = published()["table1"]
    return t1["loops"][d], t1["small_frattini_groups"][d]


@dataclass(frozen=True)
class FormInvariants:
    radical_dim: int
    slice_rank_multiset: tuple[tuple[int, int], ...]  # sorted (rank, count) pairs


def _slice_matrices(a: TriForm) -> list[tuple[int, ...]]:
    """``A(e_i, ., .)`` as a d x d alternating matrix of row ints."""
    d = a.dim
    mats = [[0] * d for _ in range(d)]
    for i, j, k in a.triples():
        for x, y, z in ((i, j, k), (j, i, k), (k, i, j)):
            mats[x][y] ^= 1 << z
            mats[x][z] ^= 1 << y
    return [tuple(m) for m in mats]


def radical(a: TriForm) -> list[int]:
    """Basis of ``{v : A(v, x, y) = 0 for all x, y}``."""
    return gf2.nullspace(slice_rows(a), a.dim)


def invariants(a: TriForm) -> FormInvariants:
    d = a.dim
    mats = _slice_matrices(a)
    ranks = Counter()
    for v in range(1 << d):
        rows = [0] * d
        for i in range(d):
            if (v >> i) & 1:
                rows = [r ^ s for r, s in zip(rows, mats[i])]
        ranks[gf2.rank(rows)] += 1
    return FormInvariants(len(radical(a)), tuple(sorted(ranks.items())))


def equivalent(a: TriForm, b: TriForm, *, budget: int = 4_000_000, seed: int = 0,
               batch: int = 20_000) -> BitMat | None:
    """An ``S`` with ``A^S = B``, or None when the forms are inequivalent.

    For d <= 6 the answer comes from the complete orbit index of forms.
    Larger dimensions use a meet-in-the-middle search over random elements;
    running out of ``budget`` raises :class:`Undecided`.
    """
    from .glaction import act3, build_action
    from .stratifier import stage1_index

    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    d = a.dim
    if a == b:
        return identity(d)
    if invariants(a) != invariants(b):
        return None
    if d <= 6:
        oi = stage1_index(d)
        if oi.rep_of(a.bits) != oi.rep_of(b.bits):
            return None
        s = mat_mul(mat_inv(oi.transporter(a.bits)), oi.transporter(b.bits))
    else:
        s = _meet_in_middle(a, b, budget, seed, batch)
    if act3(build_action(s), a) != b:
        raise AssertionError("transporter check failed")
    return s


def _meet_in_middle(a: TriForm, b: TriForm, budget: int, seed: int, batch: int) -> BitMat:
    from .glaction import form_images_batch

    d = a.dim
    rng = np.random.default_rng(seed)
    seen_a: dict[int, np.ndarray] = {}
    seen_b: dict[int, np.ndarray] = {}
    used = 0
    while used < budget:
        ta = gf2.random_invertible_batch(d, batch, rng)
        tb = gf2.random_invertible_batch(d, batch, rng)
        used += 2 * batch
        for t, img in zip(ta, form_images_batch(ta, a).tolist()):
            seen_a.setdefault(img, t)
        for t, img in zip(tb, form_images_batch(tb, b).tolist()):
            seen_b.setdefault(img, t)
        common = seen_a.keys() & seen_b.keys()
        if common:
            img = min(common)
            # A^{S1} = B^{S2} with S = T^{-1}, so A^{S1 S2^{-1}} = B
            s1 = mat_inv(tuple(int(x) for x in seen_a[img]))
            s2_inv = tuple(int(x) for x in seen_b[img])
            return mat_mul(s1, s2_inv)
    raise Undecided(f"no transporter {format_form(a)} -> {format_form(b)} within {budget} samples")
