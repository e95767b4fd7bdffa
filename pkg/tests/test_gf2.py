import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codeloops import gf2
from codeloops.gf2 import (AffineSystem, BitVec, SingularMatrixError, gl_generators, gl_order,
                           hamming_weight, identity, intersect, mat_inv, mat_mul)
from codeloops.groupkit import bsgs_build


def test_hamming_weight_examples():
    assert hamming_weight(BitVec(8)) == 0
    assert hamming_weight(BitVec.from_coords([1, 1, 1, 1, 0, 0, 0, 0])) == 4
    assert hamming_weight(BitVec(7, 0b1111111)) == 7


def test_intersect_examples():
    u = BitVec.from_coords([1, 1, 0, 0])
    v = BitVec.from_coords([0, 1, 1, 0])
    assert intersect(u, v) == BitVec.from_coords([0, 1, 0, 0])
    assert intersect(u, u) == u
    assert intersect(u, BitVec(4)) == BitVec(4)
    with pytest.raises(ValueError):
        intersect(u, BitVec(5))


def test_bitvec_rejects_high_bits():
    with pytest.raises(ValueError):
        BitVec(3, 0b1000)
    with pytest.raises(ValueError):
        BitVec(65)


@given(st.integers(1, 64).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, 2**d - 1),
                                                      st.integers(0, 2**d - 1))))
def test_weight_identity(args):
    d, a, b = args
    u, v = BitVec(d, a), BitVec(d, b)
    assert hamming_weight(u ^ v) + 2 * hamming_weight(intersect(u, v)) == \
        hamming_weight(u) + hamming_weight(v)


def test_inverse_examples():
    assert mat_inv(identity(5)) == identity(5)
    p = gf2.permutation_matrix([2, 0, 3, 1])
    assert mat_inv(p) == gf2.transpose(p)
    with pytest.raises(SingularMatrixError):
        mat_inv((0b11, 0b11))


@settings(max_examples=200)
@given(st.integers(1, 12), st.integers(0, 2**32))
def test_inverse_multiplies_back(d, seed):
    m = gf2.random_invertible(d, random.Random(seed))
    assert mat_mul(m, mat_inv(m)) == identity(d)
    assert mat_mul(mat_inv(m), m) == identity(d)


def test_vec_mat_is_right_action(rng):
    for _ in range(50):
        a = gf2.random_invertible(6, rng)
        b = gf2.random_invertible(6, rng)
        v = rng.getrandbits(6)
        assert gf2.vec_mat(v, mat_mul(a, b)) == gf2.vec_mat(gf2.vec_mat(v, a), b)


def test_solve_affine_examples():
    assert gf2.solve_affine(AffineSystem(3, [])) == 0
    s = AffineSystem(3, [])
    s.add([0], 1)
    s.add([0, 1], 0)
    assert gf2.solve_affine(s) & 0b11 == 0b11
    s = AffineSystem(1, [])
    s.add([0], 0)
    s.add([0], 1)
    assert gf2.solve_affine(s) is None


@settings(max_examples=100)
@given(st.integers(1, 20), st.integers(1, 40), st.integers(0, 2**32))
def test_solve_affine_satisfies_rows(nvars, nrows, seed):
    r = random.Random(seed)
    x0 = r.getrandbits(nvars)
    s = AffineSystem(nvars, [])
    for _ in range(nrows):
        c = r.getrandbits(nvars)
        s.rows.append((c, gf2.parity(c & x0)))
    x = gf2.solve_affine(s)
    assert x is not None
    assert all(gf2.parity(c & x) == rhs for c, rhs in s.rows)


@pytest.mark.parametrize("d", range(1, 9))
def test_gl_generators_generate(d):
    assert bsgs_build(gl_generators(d), d).order == gl_order(d)


def test_gl_orders_published():
    assert gl_order(3) == 168
    assert gl_order(4) == 20160
    assert gl_order(6) == 20158709760


def test_nullspace_and_rank(rng):
    for _ in range(30):
        rows = [rng.getrandbits(7) for _ in range(5)]
        ker = gf2.nullspace(rows, 5)
        assert len(ker) + gf2.rank(rows) == 5
        for v in ker:
            assert gf2.vec_mat(v, tuple(rows)) == 0


def test_apply_linear_all_matches_vec_mat(rng):
    m = gf2.random_invertible(7, rng)
    imgs = gf2.apply_linear_all(m, 5)
    for x in range(128):
        assert int(imgs[x]) == gf2.vec_mat(x, m) ^ 5


def test_random_invertible_batch():
    m = gf2.random_invertible_batch(6, 500, np.random.default_rng(1))
    assert m.shape == (500, 6)
    assert all(gf2.is_invertible(tuple(int(x) for x in row)) for row in m)
    sing = np.array([[1, 1], [1, 2]])
    assert gf2.batch_rank(sing, 2).tolist() == [1, 2]
