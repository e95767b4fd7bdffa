"""Subgroups of GL(d, 2) as permutation groups on the vectors of F_2^d.

Elements are :data:`~codeloops.gf2.BitMat` tuples acting on the right.
The base is always ``e_1, ..., e_d``: an element fixing every basis vector
is the identity, so the chain has exactly ``d`` levels and basic orbits have
at most ``2^d - 1`` points.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .gf2 import BitMat, identity, is_identity, mat_inv, mat_mul, vec_mat

log = logging.getLogger(__name__)


class BudgetExhausted(RuntimeError):
    """A randomized search ran out of samples before reaching its goal."""


@dataclass
class _Level:
    base_point: int
    gens: list = field(default_factory=list)       # strong generators fixing earlier base points
    transversal: dict = field(default_factory=dict)  # point -> (u, u^-1), base_point . u = point


class StabChain:
    """Base and strong generating set for a subgroup of GL(d, 2)."""

    def __init__(self, d: int, gens: Iterable[BitMat] = ()):
        self.d = d
        self.generators: list[BitMat] = []
        self.levels = [_Level(1 << i) for i in range(d)]
        ident = identity(d)
        for lv in self.levels:
            lv.transversal[lv.base_point] = (ident, ident)
        for g in gens:
            self.extend(g)

    # -- queries ------------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lv.base_point for lv in self.levels]

    @property
    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.transversal)
        return n

    @property
    def strong_generators(self) -> list[BitMat]:
        seen, out = set(), []
        for lv in self.levels:
            for g in lv.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def sift(self, g: BitMat, start: int = 0) -> tuple[BitMat, int]:
        """Strip ``g`` through the chain; returns the residue and the level
        where stripping stopped (``d`` when it went all the way)."""
        for i in range(start, self.d):
            lv = self.levels[i]
            p = vec_mat(lv.base_point, g)
            t = lv.transversal.get(p)
            if t is None:
                return g, i
            g = mat_mul(g, t[1])
        return g, self.d

    def __contains__(self, g: BitMat) -> bool:
        h, _ = self.sift(tuple(g))
        return is_identity(h)

    def decompose(self, g: BitMat) -> list[BitMat] | None:
        """Transversal elements ``u_i`` with ``g = u_{d-1} ... u_1 u_0``."""
        parts = []
        for lv in self.levels:
            p = vec_mat(lv.base_point, g)
            t = lv.transversal.get(p)
            if t is None:
                return None
            parts.append(t[0])
            g = mat_mul(g, t[1])
        return parts if is_identity(g) else None

    # -- construction -------------------------------------------------------

    def extend(self, g: BitMat) -> bool:
        """Make the chain describe ``<G, g>``.  Returns False if ``g`` was
        already a member."""
        g = tuple(g)
        h, j = self.sift(g)
        if j == self.d:
            return False
        self.generators.append(g)
        self._add_strong(h, j)
        self._complete(j)
        return True

    def _add_strong(self, h: BitMat, j: int) -> None:
        for l in range(j + 1):
            self.levels[l].gens.append(h)
            self._orbit(l)

    def _orbit(self, l: int) -> None:
        lv = self.levels[l]
        trans = lv.transversal
        queue = list(trans)
        while queue:
            nxt = []
            for p in queue:
                u, _ = trans[p]
                for s in lv.gens:
                    q = vec_mat(p, s)
                    if q not in trans:
                        w = mat_mul(u, s)
                        trans[q] = (w, mat_inv(w))
                        nxt.append(q)
            queue = nxt

    def _complete(self, top: int) -> None:
        """Deterministic Schreier-Sims: sift every Schreier generator at
        levels ``top, top-1, ..., 0`` until all of them strip to identity."""
        l = top
        while l >= 0:
            lv = self.levels[l]
            restart = None
            for p, (u, _) in list(lv.transversal.items()):
                for s in list(lv.gens):
                    q = vec_mat(p, s)
                    sch = mat_mul(mat_mul(u, s), lv.transversal[q][1])
                    h, j = self.sift(sch, l + 1)
                    if j < self.d:
                        self._add_strong(h, j)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                l = restart
            else:
                l -= 1

    def extend_until(self, elements: Iterator[BitMat], target: int, budget: int) -> int:
        """Sift random elements of a larger group whose order is known until
        this chain reaches ``target``.  Unverified Schreier generators are
        never trusted here: the order only ever undercounts, so reaching
        ``target`` proves completeness.  Returns the number of samples."""
        n = 0
        while self.order < target:
            if n >= budget:
                raise BudgetExhausted(f"order {self.order} < target {target} after {n} samples")
            g = next(elements)
            n += 1
            h, j = self.sift(g)
            if j < self.d:
                self.generators.append(g)
                self._add_strong(h, j)
        if self.order != target:
            raise ValueError(f"chain order {self.order} exceeds target {target}")
        return n


def bsgs_build(gens: Sequence[BitMat], d: int | None = None) -> StabChain:
    if d is None:
        if not gens:
            raise ValueError("need the dimension for an empty generating set")
        d = len(gens[0])
    return StabChain(d, gens)


def membership(chain: StabChain, g: BitMat) -> bool:
    return g in chain


class RandomSampler:
    """Exactly uniform elements: one uniform transversal element per level."""

    def __init__(self, chain: StabChain, seed: int = 0):
        self.chain = chain
        self.seed = seed
        self.rng = random.Random(seed)
        self._trans = [list(lv.transversal.values()) for lv in chain.levels]

    def __iter__(self) -> Iterator[BitMat]:
        return self

    def __next__(self) -> BitMat:
        return self.random_element()

    def random_element(self) -> BitMat:
        g = identity(self.chain.d)
        for ts in self._trans:
            g = mat_mul(ts[self.rng.randrange(len(ts))][0], g)
        return g


def random_element(sampler: RandomSampler) -> BitMat:
    return sampler.random_element()


def small_generating_set(chain: StabChain, seed: int = 0, max_tries: int = 200) -> list[BitMat]:
    """A few random elements that generate the whole group of ``chain``."""
    if chain.order == 1:
        return []
    sampler = RandomSampler(chain, seed)
    sub = StabChain(chain.d)
    gens: list[BitMat] = []
    for _ in range(max_tries):
        g = sampler.random_element()
        if sub.extend(g):
            gens.append(g)
            if sub.order == chain.order:
                return gens
    log.warning("falling back to strong generators")
    return chain.strong_generators


def stabilizer_birthday(
    chain: StabChain,
    point: Hashable,
    apply: Callable[[BitMat, Hashable], Hashable],
    known_order: int | None = None,
    *,
    seed: int = 0,
    budget: int = 10_000_000,
    saturation: int = 20,
    samples: Iterator[tuple[object, Hashable]] | None = None,
    materialize: Callable[[object], BitMat] | None = None,
) -> StabChain:
    """Stabilizer of ``point`` from collisions of random images.

    Two samples with ``point^g = point^h`` give ``g h^{-1}`` in the
    stabilizer, and that element is uniform in the stabilizer.  Collection
    stops at ``known_order`` if given; otherwise after ``saturation``
    consecutive collision elements that were already members.  The result is
    a subgroup of the true stabilizer; completeness has to be certified by
    the caller.

    ``samples`` may supply ``(token, image)`` pairs from a faster source;
    ``materialize`` turns a token into its group element (only done for
    colliding samples).
    """
    d = chain.d
    if samples is None:
        sampler = RandomSampler(chain, seed)
        samples = ((g, apply(g, point)) for g in sampler)
        materialize = None
    mat = materialize or (lambda t: t)
    H = StabChain(d)
    seen: dict[Hashable, object] = {}
    streak = 0
    n = 0
    collisions = 0
    for token, img in samples:
        n += 1
        other = seen.get(img)
        if other is None:
            seen[img] = token
        else:
            collisions += 1
            s = mat_mul(mat(token), mat_inv(mat(other)))
            if apply(s, point) != point:
                raise AssertionError("collision element does not fix the point")
            if H.extend(s):
                streak = 0
            else:
                streak += 1
            if known_order is not None:
                if H.order == known_order:
                    break
                if H.order > known_order:
                    raise ValueError(f"stabilizer order {H.order} exceeds {known_order}")
            elif streak >= saturation:
                break
        if n >= budget:
            raise BudgetExhausted(f"{n} samples, {collisions} collisions, order {H.order}")
    log.debug("birthday stabilizer: %d samples, %d collisions, order %d", n, collisions, H.order)
    return H
