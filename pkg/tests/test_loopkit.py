import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codeloops.loopkit import (CodeSpec, EncodingError, FactorSet, LoopTable, NotALoop,
                               NotDoublyEven, build_loop, check_factor_set, code_from_rows,
                               code_to_params, element_orders, explicit_factor_set, extract_PCA,
                               golay_code, hamming_code, is_associative, is_commutative,
                               is_doubly_even, is_loop, is_moufang, loop_from_params, read_code,
                               read_table, solve_factor_set, write_table)
from codeloops.polarization import ParamVector
from codeloops.stratifier import enumerate_all


def test_zero_params_give_zero_factor_set():
    th = solve_factor_set(ParamVector(3))
    assert not th.table.any()
    t = build_loop(th)
    assert is_associative(t) and is_commutative(t)
    m = t.table.astype(int)
    assert all(m[x, x] == 0 for x in range(16))


def test_associator_constraint_d3():
    th = solve_factor_set(ParamVector.from_sets(3, omega3="123")).table
    e1, e2, e3 = 1, 2, 4
    assert th[e1 ^ e2, e3] ^ th[e1, e2 ^ e3] ^ th[e2, e3] ^ th[e1, e2] == 1


@pytest.mark.parametrize("seed", range(20))
def test_constraint_audit_d4(seed):
    w = ParamVector.random(4, random.Random(seed))
    assert check_factor_set(solve_factor_set(w), w)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**64))
def test_explicit_factor_set(d, seed):
    w = ParamVector.random(d, random.Random(seed))
    assert check_factor_set(explicit_factor_set(w), w)


def test_pinning_changes_solution_not_parameters():
    w = ParamVector.random(4, random.Random(1))
    a, b = solve_factor_set(w), solve_factor_set(w, pin_seed=5)
    assert not np.array_equal(a.table, b.table)
    assert check_factor_set(b, w)
    assert extract_PCA(build_loop(a)) == extract_PCA(build_loop(b)) == w
    assert extract_PCA(build_loop(explicit_factor_set(w))) == w


def test_solver_guard():
    with pytest.raises(ValueError):
        solve_factor_set(ParamVector(7))


def test_factor_set_normalized():
    with pytest.raises(ValueError):
        FactorSet(1, np.array([[0, 1], [0, 0]], dtype=np.uint8))


def test_order16_nonassociative():
    t = loop_from_params(ParamVector.from_sets(3, omega3="123"))
    assert t.order == 16
    assert is_moufang(t).holds
    assert not is_associative(t)


def test_order8_has_element_of_order4():
    t = loop_from_params(ParamVector.from_sets(2, omega1=[1]))
    assert is_associative(t)
    assert 4 in element_orders(t)


def test_canonical_loops_d3_d4():
    for d in (3, 4):
        for f in enumerate_all(d).forms:
            for w in f.representatives:
                t = loop_from_params(w)
                assert is_moufang(t).method == "exhaustive"
                assert is_moufang(t).holds
                assert extract_PCA(t) == w
                if w.omega3 == 0:
                    assert is_associative(t)
                    if w.omega2 == 0:
                        assert is_commutative(t)


def test_corrupted_table():
    t = build_loop(FactorSet(3, np.zeros((8, 8), dtype=np.uint8)))
    m = t.table.astype(np.int64).copy()
    # swap two columns outside the identity row/column: still Latin
    m[1:, [3, 5]] = m[1:, [5, 3]]
    bad = LoopTable(16, m)
    if is_loop(bad):
        assert not is_moufang(bad).holds
    else:
        with pytest.raises(NotALoop):
            is_moufang(bad)
    m2 = t.table.astype(np.int64).copy()
    m2[2, 3] = m2[2, 4]
    with pytest.raises(NotALoop):
        is_moufang(LoopTable(16, m2))


def test_extract_small_groups():
    m = np.array([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
    t = LoopTable(4, m)  # Klein four group with d = 1: fine
    assert extract_PCA(t) == ParamVector(1)
    z4 = LoopTable(4, np.array([[(i + j) % 4 for j in range(4)] for i in range(4)]))
    # Z4 with generator 1: 1 * 1 = 2 is central, so omega1 = 1
    assert extract_PCA(z4) == ParamVector(1, 1)
    # Z4 generated by 2, so 1 * 1 = 3 is not the central element 2
    bad = LoopTable(4, np.array([[0, 1, 2, 3], [1, 3, 0, 2], [2, 0, 3, 1], [3, 2, 1, 0]]))
    with pytest.raises(EncodingError):
        extract_PCA(bad)


def test_sampled_moufang_label():
    t = loop_from_params(ParamVector.random(8, random.Random(1)))
    r = is_moufang(t, samples=20_000, seed=1)
    assert r.method == "sampled" and r.holds


def test_codes():
    h = hamming_code()
    assert is_doubly_even(h)
    assert is_doubly_even(code_from_rows(["1111"]))
    assert code_to_params(code_from_rows(["1111"])) == ParamVector(1, 1)
    bad = code_from_rows(["1100"])
    assert not is_doubly_even(bad)
    with pytest.raises(NotDoublyEven):
        code_to_params(bad)
    t = loop_from_params(code_to_params(h))
    assert t.order == 32 and is_moufang(t).holds
    with pytest.raises(ValueError):
        CodeSpec(4, (3, 3))


def test_golay_parker_params():
    g = golay_code()
    assert g.length == 24 and g.dim == 12
    assert all(bin(x).count("1") == 8 for x in g.generators)
    assert is_doubly_even(g)
    weights = sorted({bin(w).count("1") for w in g.codewords()})
    assert weights == [0, 8, 12, 16, 24]
    w = code_to_params(g)
    assert w.omega1 == 0


def test_file_round_trip(tmp_path):
    t = loop_from_params(ParamVector.from_sets(3, [1], ["12"], "123"))
    p = tmp_path / "t.txt"
    write_table(t, p)
    assert read_table(p) == t
    c = tmp_path / "c.txt"
    c.write_text("8 4\n11110000\n00111100\n00001111\n01010101\n")
    assert read_code(c) == hamming_code()
    (tmp_path / "bad.txt").write_text("2\n0 1\n")
    with pytest.raises(NotALoop):
        read_table(tmp_path / "bad.txt")
