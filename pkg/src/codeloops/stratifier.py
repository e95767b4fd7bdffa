"""Stratified orbit enumeration of code-loop parameters.

Orbits of GL(d, 2) on the parameter space are found stage by stage: forms
``A`` under ``G``; commutator parts ``C`` under the stabilizer ``G_A``;
squaring parts ``P`` under ``G_{C+A}``.  Canonical representatives are the
numerically smallest points at each stage, which coincides with the smallest
:meth:`ParamVector.encode` value over the full orbit.
"""
from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import gf2
from .formscat import catalogue
from .gf2 import BitMat, gl_generators, gl_order, identity, mat_inv, mat_mul
from .glaction import (act2, act3, act_full, build_action,
                       form_images_batch, stratum1_images, stratum2_images, stratum3_images)
from .groupkit import (RandomSampler, StabChain, bsgs_build,
                       small_generating_set, stabilizer_birthday)
from .polarization import ParamVector, TriForm, format_form, map_table, subsets

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240101
DEFAULT_REP_CAP = 1_000_000
DENSE_LIMIT_BITS = 28


class VerificationError(RuntimeError):
    """An identity that certifies the enumeration failed."""


class MemoryBudgetExceeded(MemoryError):
    pass


def memory_budget() -> int:
    return int(os.environ.get("CODELOOPS_MEMORY_BUDGET", 3 << 30))


# -- orbit index ------------------------------------------------------------

@dataclass
class OrbitIndex:
    """Orbit partition of ``0 .. size-1`` with Schreier links.

    ``parent[p]`` and ``parent_gen[p]`` record that
    ``perms[parent_gen[p]][parent[p]] == p``; representatives have parent -1.
    """
    size: int
    orbit_id: np.ndarray
    parent: np.ndarray
    parent_gen: np.ndarray
    reps: list[int]
    sizes: list[int]
    elements: list[BitMat]

    def __len__(self) -> int:
        return len(self.reps)

    def rep_of(self, point: int) -> int:
        return self.reps[self.orbit_id[self._check(point)]]

    def size_of(self, point: int) -> int:
        return self.sizes[self.orbit_id[self._check(point)]]

    def _check(self, point: int) -> int:
        if not 0 <= point < self.size or self.orbit_id[point] < 0:
            raise KeyError(f"point {point} not indexed")
        return point

    def path(self, point: int) -> list[int]:
        """Generator indices leading from the representative to ``point``."""
        self._check(point)
        gens = []
        p = point
        while self.parent[p] >= 0 and p != self.reps[self.orbit_id[p]]:
            gens.append(int(self.parent_gen[p]))
            p = int(self.parent[p])
        gens.reverse()
        return gens

    def transporter(self, point: int) -> BitMat:
        """``g`` with ``rep^g = point``."""
        d = len(self.elements[0]) if self.elements else None
        g = None
        for k in self.path(point):
            g = self.elements[k] if g is None else mat_mul(g, self.elements[k])
        if g is None:
            if d is None:
                raise ValueError("index has no generators; dimension unknown")
            g = identity(d)
        return g


def orbit_partition(perms: Sequence[np.ndarray], elements: Sequence[BitMat], size: int | None = None) -> OrbitIndex:
    """Partition ``range(size)`` into orbits of the permutations ``perms``.

    ``perms[k][x]`` is the image of ``x`` under ``elements[k]``.  Orbits are
    grown by breadth-first search from the smallest unvisited point, so
    orbit ids increase with their representatives.
    """
    if size is None:
        size = len(perms[0]) if perms else 1
    if size * 13 > memory_budget():
        raise MemoryBudgetExceeded(f"orbit index over {size} points exceeds the memory budget")
    idt = np.int32
    orbit_id = np.full(size, -1, dtype=idt)
    parent = np.full(size, -1, dtype=np.int64 if size > 2**31 else np.int32)
    parent_gen = np.zeros(size, dtype=np.int8)
    perms = [np.asarray(p).astype(parent.dtype, copy=False) for p in perms]
    reps: list[int] = []
    sizes: list[int] = []
    pos = 0
    step = 1 << 16
    while True:
        start = -1
        while pos < size:
            z = np.flatnonzero(orbit_id[pos:pos + step] < 0)
            if z.size:
                start = pos + int(z[0])
                break
            pos += step
        if start < 0:
            break
        k = len(reps)
        orbit_id[start] = k
        frontier = np.array([start], dtype=parent.dtype)
        count = 1
        while frontier.size:
            grown = []
            for g, perm in enumerate(perms):
                img = perm[frontier]
                fresh = orbit_id[img] < 0
                if not fresh.any():
                    continue
                img = img[fresh]
                new, first = np.unique(img, return_index=True)
                orbit_id[new] = k
                parent[new] = frontier[fresh][first]
                parent_gen[new] = g
                grown.append(new)
            frontier = np.concatenate(grown) if grown else frontier[:0]
            count += frontier.size
        reps.append(start)
        sizes.append(count)
    return OrbitIndex(size, orbit_id, parent, parent_gen, reps, sizes, list(elements))


def orbit_reps_small(perms: Sequence[np.ndarray], size: int) -> tuple[list[int], list[int]]:
    """Orbit representatives (minimal points) and sizes, no Schreier data."""
    if not perms:
        return list(range(size)), [1] * size
    src = np.tile(np.arange(size), len(perms))
    dst = np.concatenate([np.asarray(p, dtype=np.int64) for p in perms])
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(size, size))
    n, labels = connected_components(graph, directed=True, connection="weak")
    reps = np.full(n, size, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(size))
    counts = np.bincount(labels, minlength=n)
    order = np.argsort(reps)
    return reps[order].tolist(), counts[order].tolist()


def stabilizer_from_schreier(oi: OrbitIndex, rep: int, parent_chain: StabChain,
                             apply: Callable[[BitMat, int], int], *, seed: int = 0,
                             budget: int = 100_000) -> StabChain:
    """Stabilizer of ``rep`` inside ``parent_chain``'s group.

    Uses random Schreier generators ``g t_p^{-1}`` where ``p = rep^g`` and
    ``t_p`` is the Schreier-tree transporter; they are uniform in the
    stabilizer.  The order must come out as ``|parent| / |orbit|``.
    """
    size = oi.size_of(rep)
    if oi.rep_of(rep) != rep:
        raise ValueError("not an orbit representative")
    if size == 1:
        return parent_chain
    if parent_chain.order % size:
        raise VerificationError(f"orbit size {size} does not divide {parent_chain.order}")
    target = parent_chain.order // size
    sampler = RandomSampler(parent_chain, seed)

    def schreier_elements():
        while True:
            g = sampler.random_element()
            s = mat_mul(g, mat_inv(oi.transporter(apply(g, rep))))
            if apply(s, rep) != rep:
                raise AssertionError("Schreier element does not fix the representative")
            yield s

    H = StabChain(parent_chain.d)
    H.extend_until(schreier_elements(), target, budget)
    return H


# -- stage 1: forms ---------------------------------------------------------

@lru_cache(maxsize=None)
def gl_chain(d: int) -> StabChain:
    return bsgs_build(gl_generators(d), d)


@lru_cache(maxsize=4)
def stage1_index(d: int) -> OrbitIndex:
    """Complete orbit index of forms under GL(d, 2); feasible for d <= 6."""
    if d > 6:
        raise MemoryBudgetExceeded("forms are indexed explicitly only for d <= 6")
    gens = gl_generators(d)
    perms = [stratum3_images(build_action(g)) for g in gens]
    return orbit_partition(perms, gens, 1 << comb(d, 3))


def _act3_int(g: BitMat, a: int) -> int:
    return act3(build_action(g), a)


def _form_samples(a: TriForm, seed: int, batch: int = 20_000):
    """``(T, A^S)`` pairs for uniform random ``S`` with ``T = S^{-1}``."""
    rng = np.random.default_rng(seed)
    d = a.dim
    while True:
        t = gf2.random_invertible_batch(d, batch, rng)
        for row, img in zip(t.tolist(), form_images_batch(t, a).tolist()):
            yield tuple(row), img


def birthday_form_stabilizer(a: TriForm, *, seed: int = DEFAULT_SEED, known_order: int | None = None,
                             budget: int = 5_000_000, saturation: int = 20) -> StabChain:
    d = a.dim
    return stabilizer_birthday(
        gl_chain(d), a.bits, _act3_int, known_order, seed=seed, budget=budget,
        saturation=saturation, samples=_form_samples(a, seed), materialize=mat_inv)


def enumerate_stage1(d: int, *, seed: int = DEFAULT_SEED, allow_heavy: bool = False,
                     budget: int = 5_000_000) -> list[tuple[TriForm, StabChain]]:
    """Form representatives with their stabilizers, certified by the
    index-sum identity."""
    if not 1 <= d <= 8:
        raise ValueError("d must be in 1..8")
    if d <= 6:
        oi = stage1_index(d)
        G = gl_chain(d)
        out = []
        for i, rep in enumerate(oi.reps):
            H = stabilizer_from_schreier(oi, rep, G, _act3_int, seed=seed + i)
            out.append((TriForm(d, rep), H))
    else:
        if d == 8 and not allow_heavy:
            raise MemoryBudgetExceeded("d = 8 needs allow_heavy")
        out = []
        for entry in catalogue(d):
            t0 = time.perf_counter()
            H = birthday_form_stabilizer(entry.form, seed=seed + entry.id, budget=budget)
            log.info("form %s: |H_A| = %d (%.1fs)", entry.text, H.order, time.perf_counter() - t0)
            out.append((entry.form, H))
    if not verify_index_sum(out, d):
        raise VerificationError(
            f"index sum over {len(out)} forms is not 2^{comb(d, 3)}: "
            f"{sum(gl_order(d) // h.order for _, h in out)}")
    return out


def verify_index_sum(forms: Sequence[tuple[TriForm, StabChain]], d: int) -> bool:
    """``sum |GL(d,2)| / |H_A| == 2^C(d,3)`` in exact integer arithmetic."""
    g = gl_order(d)
    total = 0
    for _, h in forms:
        order = h if isinstance(h, int) else h.order
        if g % order:
            return False
        total += g // order
    return total == 1 << comb(d, 3)


# -- stages 2 and 3 ---------------------------------------------------------

def _subgroup_generators(chain: StabChain, seed: int) -> list[BitMat]:
    return small_generating_set(chain, seed=seed)


def enumerate_stage2(a: TriForm, G_A: StabChain, *, seed: int = DEFAULT_SEED,
                     keep_index: bool = False):
    """Orbits of ``G_A`` on commutator parts, with stabilizers.

    Returns ``(reps, index)`` where ``reps`` is a list of
    ``(c, G_{C+A})`` in increasing ``c`` order; ``index`` is the
    :class:`OrbitIndex` when ``keep_index`` is set, else None.
    """
    d = a.dim
    n2 = comb(d, 2)
    if n2 > DENSE_LIMIT_BITS:
        raise MemoryBudgetExceeded(f"2^{n2} commutator parts")
    gens = _subgroup_generators(G_A, seed)
    for g in gens:
        if act3(build_action(g), a.bits) != a.bits:
            raise AssertionError("generator does not fix the form")
    perms = [stratum2_images(build_action(g), a.bits) for g in gens]
    oi = orbit_partition(perms, gens, 1 << n2)
    if sum(oi.sizes) != 1 << n2:
        raise VerificationError("stage-2 orbit sizes do not cover the space")

    def apply(g: BitMat, c: int) -> int:
        return act2(build_action(g), c, a.bits)

    reps = []
    for i, c in enumerate(oi.reps):
        K = stabilizer_from_schreier(oi, c, G_A, apply, seed=seed + 7919 * i)
        if K.order * oi.sizes[i] != G_A.order:
            raise VerificationError("Lagrange identity failed in stage 2")
        reps.append((c, K))
    return reps, (oi if keep_index else None)


def stage3_perms(c: int, a: TriForm, G_CA: StabChain) -> tuple[list[np.ndarray], list[BitMat]]:
    gens = G_CA.strong_generators
    perms = []
    for g in gens:
        ad = build_action(g)
        if act2(ad, c, a.bits) != c:
            raise AssertionError("generator does not fix the commutator part")
        perms.append(stratum1_images(ad, c, a.bits))
    return perms, gens


def enumerate_stage3(c: int, a: TriForm, G_CA: StabChain) -> tuple[int, list[int]]:
    """Number of orbits on squaring parts and their minimal representatives."""
    d = a.dim
    perms, _ = stage3_perms(c, a, G_CA)
    reps, sizes = orbit_reps_small(perms, 1 << d)
    for s in sizes:
        if G_CA.order % s:
            raise VerificationError("stage-3 orbit size does not divide the stabilizer order")
    return len(reps), reps


# -- full enumeration -------------------------------------------------------

@dataclass
class FormRecord:
    form: TriForm
    stabilizer_order: int
    c_orbits: int
    loops: int
    table_id: int | None = None
    table_form: str | None = None
    representatives: list[ParamVector] | None = None

    def to_dict(self, with_reps: bool = False) -> dict:
        out = {
            "form": format_form(self.form),
            "table_id": self.table_id,
            "table_form": self.table_form,
            "stabilizer_order": str(self.stabilizer_order),
            "c_orbits": self.c_orbits,
            "loops": self.loops,
        }
        if with_reps and self.representatives is not None:
            out["representatives"] = [r.to_sets() for r in self.representatives]
        return out


@dataclass
class EnumerationReport:
    dim: int
    forms: list[FormRecord]

    @property
    def total(self) -> int:
        return sum(f.loops for f in self.forms)

    @property
    def zero_form_total(self) -> int:
        return sum(f.loops for f in self.forms if f.form.bits == 0)

    def check(self) -> None:
        zero = [f for f in self.forms if f.form.bits == 0]
        if len(zero) != 1:
            raise VerificationError("exactly one record must carry the zero form")

    def to_dict(self, with_reps: bool = False) -> dict:
        return {
            "dim": self.dim,
            "total": str(self.total),
            "zero_form_total": str(self.zero_form_total),
            "forms": [f.to_dict(with_reps) for f in self.forms],
        }

    def to_json(self, with_reps: bool = False) -> str:
        return json.dumps(self.to_dict(with_reps), sort_keys=True, indent=1)


@dataclass
class FormData:
    """Everything computed for one form; kept for canonicalization."""
    form: TriForm
    chain: StabChain
    c_reps: list[tuple[int, StabChain]]
    index: OrbitIndex | None
    loops: int = 0
    representatives: list[ParamVector] | None = None


def _process_form(a: TriForm, G_A: StabChain, seed: int, rep_cap: int, keep_index: bool) -> FormData:
    t0 = time.perf_counter()
    c_reps, oi = enumerate_stage2(a, G_A, seed=seed, keep_index=keep_index)
    loops = 0
    reps: list[ParamVector] | None = []
    for c, K in c_reps:
        n, ps = enumerate_stage3(c, a, K)
        loops += n
        if reps is not None:
            if len(reps) + n > rep_cap:
                reps = None
            else:
                reps.extend(ParamVector(a.dim, p, c, a.bits) for p in ps)
    log.info("form %s: %d C-orbits, %d loops (%.1fs)", format_form(a), len(c_reps), loops,
             time.perf_counter() - t0)
    return FormData(a, G_A, c_reps, oi, loops, reps)


def _process_form_job(args) -> FormData:
    a, gens, seed, rep_cap = args
    G_A = StabChain(a.dim, gens)
    return _process_form(a, G_A, seed, rep_cap, False)


def _label_forms(d: int, forms: list[tuple[TriForm, StabChain]]) -> dict[int, tuple[int, str]]:
    """Map each computed form to its published ID and string."""
    if d < 3:
        return {}
    labels = {}
    if d <= 6:
        oi = stage1_index(d)
        for entry in catalogue(d):
            labels[oi.rep_of(entry.form.bits)] = (entry.id, entry.text)
    else:
        for entry in catalogue(d):
            labels[entry.form.bits] = (entry.id, entry.text)
    return labels


class Classifier:
    """Runs the three-stage enumeration for one dimension and keeps the data
    needed to canonicalize parameter vectors afterwards."""

    def __init__(self, d: int, *, seed: int = DEFAULT_SEED, workers: int = 1,
                 rep_cap: int = DEFAULT_REP_CAP, keep_indices: bool = True,
                 allow_heavy: bool = False, only_forms: Sequence[TriForm] | None = None):
        if not 1 <= d <= 8:
            raise ValueError("d must be in 1..8")
        if d == 8 and not allow_heavy:
            raise MemoryBudgetExceeded("d = 8 needs allow_heavy")
        self.d = d
        self.seed = seed
        self.workers = workers
        self.rep_cap = rep_cap
        self.keep_indices = keep_indices and workers <= 1
        self.allow_heavy = allow_heavy
        self.only_forms = only_forms
        self.forms: list[FormData] = []
        self.report: EnumerationReport | None = None

    def run(self) -> EnumerationReport:
        d = self.d
        stage1 = enumerate_stage1(d, seed=self.seed, allow_heavy=self.allow_heavy)
        labels = _label_forms(d, stage1)
        todo = stage1
        if self.only_forms is not None:
            wanted = {self.form_class(f) for f in self.only_forms}
            todo = [(a, h) for a, h in stage1 if a.bits in wanted]
        if d >= 7:
            todo = sorted(todo, key=lambda ah: labels[ah[0].bits][0])
        if self.workers > 1 and len(todo) > 1:
            jobs = [(a, h.strong_generators, self.seed + 104729 * (i + 1), self.rep_cap)
                    for i, (a, h) in enumerate(todo)]
            with ProcessPoolExecutor(self.workers) as ex:
                self.forms = list(ex.map(_process_form_job, jobs))
        else:
            self.forms = [_process_form(a, h, self.seed + 104729 * (i + 1), self.rep_cap,
                                        self.keep_indices)
                          for i, (a, h) in enumerate(todo)]
        records = []
        for fd in self.forms:
            tid, text = labels.get(fd.form.bits, (None, None))
            records.append(FormRecord(fd.form, fd.chain.order, len(fd.c_reps), fd.loops,
                                      tid, text, fd.representatives))
        self.report = EnumerationReport(d, records)
        if self.only_forms is None:
            self.report.check()
        return self.report

    # -- canonical forms -----------------------------------------------------

    def form_class(self, a: TriForm) -> int:
        """Code of the representative of ``a``'s form class."""
        return self._match_form(a)[0]

    def _match_form(self, a: TriForm) -> tuple[int, BitMat]:
        """Representative code ``r`` and ``g`` with ``r^g = a``."""
        d = self.d
        if d <= 6:
            oi = stage1_index(d)
            return oi.rep_of(a.bits), oi.transporter(a.bits)
        from .formscat import equivalent, invariants
        inv = invariants(a)
        for entry in catalogue(d):
            if invariants(entry.form) != inv:
                continue
            s = equivalent(entry.form, a, seed=self.seed)
            if s is not None:
                return entry.form.bits, s
        raise VerificationError(f"form {format_form(a)} matches no catalogue entry")

    def canonicalize(self, omega: ParamVector) -> tuple[ParamVector, BitMat]:
        """Canonical representative ``w`` of ``omega``'s orbit and ``g`` with
        ``act_full(build_action(g), w) == omega``."""
        if omega.dim != self.d:
            raise ValueError("dimension mismatch")
        if not self.forms:
            self.keep_indices = True
            self.run()
        by_form = {fd.form.bits: fd for fd in self.forms}
        rep_a, t1 = self._match_form(omega.form)
        fd = by_form.get(rep_a)
        if fd is None or fd.index is None:
            raise ValueError("no stored stage data for this form class")
        w1 = act_full(build_action(mat_inv(t1)), omega)
        assert w1.omega3 == rep_a
        oi = fd.index
        c_rep = oi.rep_of(w1.omega2)
        t2 = oi.transporter(w1.omega2)
        w2 = act_full(build_action(mat_inv(t2)), w1)
        assert w2.omega2 == c_rep and w2.omega3 == rep_a
        K = dict(fd.c_reps)[c_rep]
        perms, gens = stage3_perms(c_rep, fd.form, K)
        oi3 = orbit_partition(perms, gens, 1 << self.d) if gens else None
        if oi3 is None:
            p_rep, t3 = w2.omega1, identity(self.d)
        else:
            p_rep, t3 = oi3.rep_of(w2.omega1), oi3.transporter(w2.omega1)
        canon = ParamVector(self.d, p_rep, c_rep, rep_a)
        g = mat_mul(mat_mul(t3, t2), t1)
        if act_full(build_action(g), canon) != omega:
            raise AssertionError("canonical transporter check failed")
        return canon, g


@lru_cache(maxsize=8)
def classifier(d: int, seed: int = DEFAULT_SEED) -> Classifier:
    c = Classifier(d, seed=seed, keep_indices=True)
    c.run()
    return c


def enumerate_all(d: int, *, seed: int = DEFAULT_SEED, workers: int = 1,
                  rep_cap: int = DEFAULT_REP_CAP, allow_heavy: bool = False,
                  only_forms: Sequence[TriForm] | None = None) -> EnumerationReport:
    c = Classifier(d, seed=seed, workers=workers, rep_cap=rep_cap, keep_indices=False,
                   allow_heavy=allow_heavy, only_forms=only_forms)
    return c.run()


def canonicalize(omega: ParamVector, seed: int = DEFAULT_SEED) -> tuple[ParamVector, BitMat]:
    if omega.dim > 7:
        raise ValueError("canonicalization supports d <= 7")
    return classifier(omega.dim, seed).canonicalize(omega)


# -- brute-force oracle -----------------------------------------------------

def all_elements(d: int) -> list[BitMat]:
    """Every element of GL(d, 2), from products of transversal elements."""
    chain = gl_chain(d)
    trans = [[u for u, _ in lv.transversal.values()] for lv in chain.levels]
    out = []
    for combo in product(*trans):
        g = identity(d)
        for u in combo:
            g = mat_mul(u, g)
        out.append(g)
    return out


def _readout_plan(d: int) -> list[tuple[int, ...]]:
    """Columns of basis-subset sums used to read parameters off a truth
    table, one group of columns per parameter coordinate."""
    groups = []
    for k in (1, 2, 3):
        for s in subsets(d, k):
            cols = []
            for r in range(1, 1 << k):
                cols.append(sum(1 << s[i] for i in range(k) if (r >> i) & 1))
            groups.append(tuple(cols))
    return groups


def brute_force_orbits(d: int, *, transposed: bool = False) -> EnumerationReport:
    """Orbits of the whole parameter space from every group element.

    Independent of the stage machinery: each element's action is obtained
    by permuting truth tables, and the label of a point is the minimum of
    its images over the whole group.
    """
    if d > 4:
        raise ValueError("brute force is limited to d <= 4")
    n = d + comb(d, 2) + comb(d, 3)
    basis = [ParamVector.decode(d, 1 << b) for b in range(n)]
    tables = np.array([map_table(w) for w in basis], dtype=np.uint8)   # (n, 2^d)
    groups = _readout_plan(d)
    width = max(len(g) for g in groups)
    cols = np.array([g + (0,) * (width - len(g)) for g in groups], dtype=np.int64)
    valid = np.array([[1] * len(g) + [0] * (width - len(g)) for g in groups], dtype=np.uint8)
    labels = np.arange(1 << n, dtype=np.uint64)
    a_shift = d + comb(d, 2)
    fixers: dict[int, int] = {}
    forms = range(1 << comb(d, 3))
    for S in all_elements(d):
        T = gf2.transpose(S) if transposed else mat_inv(S)
        img = gf2.apply_linear_all(T).astype(np.int64)
        g = tables[:, img]                                    # f^S for each basis vector
        vals = (g[:, cols] & valid[None]).sum(axis=2) & 1     # (n, n) readout
        rows = [int(v) for v in (vals.astype(np.uint64) << np.arange(n, dtype=np.uint64)).sum(axis=1)]
        images = gf2.apply_linear_all(rows)
        np.minimum(labels, images, out=labels)
        for a in forms:
            code = a << a_shift
            if int(images[code]) >> a_shift == a:
                fixers[a] = fixers.get(a, 0) + 1
    reps = np.unique(labels)
    by_form: dict[int, list[int]] = {}
    for r in reps.tolist():
        by_form.setdefault(r >> a_shift, []).append(r)
    records = []
    for a in sorted(by_form):
        rs = by_form[a]
        c_parts = {(r >> d) for r in rs}
        records.append(FormRecord(TriForm(d, a), fixers[a], len(c_parts), len(rs),
                                  representatives=[ParamVector.decode(d, r) for r in rs]))
    labels_map = _label_forms(d, [])
    for rec in records:
        rec.table_id, rec.table_form = labels_map.get(rec.form.bits, (None, None))
    return EnumerationReport(d, records)
