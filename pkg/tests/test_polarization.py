import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codeloops.polarization import (F4NotZero, FormSyntaxError, ParamVector, SquareMap, TriForm,
                                    check_f4_zero, derived_form, eval_f2, eval_f3,
                                    f4_sample_check, format_form, map_from_params, map_table,
                                    params_from_map, parse_form)


def params(d):
    return st.builds(lambda s: ParamVector.random(d, random.Random(s)), st.integers(0, 2**64))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_round_trip_exhaustive(d):
    n = d + d * (d - 1) // 2 + d * (d - 1) * (d - 2) // 6
    seen = set()
    for code in range(1 << n):
        w = ParamVector.decode(d, code)
        f = map_from_params(w)
        assert check_f4_zero(f)
        assert params_from_map(f) == w
        seen.add(f.table.tobytes())
    # every f with f(0) = 0 and f_4 = 0 is hit exactly once
    count = sum(check_f4_zero(SquareMap(d, np.array([(t >> u) & 1 for u in range(1 << d)],
                                                    dtype=np.uint8)))
                for t in range(0, 1 << (1 << d), 2))
    assert len(seen) == count == 1 << n


def test_values_are_derived_forms(rng):
    for _ in range(20):
        w = ParamVector.random(6, rng)
        f = map_from_params(w)
        s = w.to_sets()
        for i in range(6):
            assert derived_form(f, 1, [1 << i]) == (i + 1 in s["omega1"])
        assert derived_form(f, 2, [1, 2]) == ("12" in s["omega2"])
        assert derived_form(f, 3, [1, 2, 4]) == int("123" in s["omega3"].split("+"))


def test_f4_nonzero_rejected():
    t = np.zeros(16, dtype=np.uint8)
    t[15] = 1  # x1 x2 x3 x4
    f = SquareMap(4, t)
    assert not check_f4_zero(f)
    assert not f4_sample_check(f)
    with pytest.raises(F4NotZero):
        params_from_map(f)


def test_square_map_requires_f0():
    with pytest.raises(ValueError):
        SquareMap(2, np.array([1, 0, 0, 0], dtype=np.uint8))


@pytest.mark.parametrize("d", [6, 7, 8])
def test_polarization_identities_sampled(d):
    """Recursion between derived forms, trilinearity of f_3 and f_4 = 0 on
    10^4 seeded samples."""
    rng = random.Random(1000 + d)
    npr = np.random.default_rng(1000 + d)
    for trial in range(5):
        w = ParamVector.random(d, rng)
        f = map_from_params(w)
        t = f.table
        v = npr.integers(0, 1 << d, size=(10_000 // 5, 5))
        for m in (1, 2, 3):
            for row in v[:200]:
                vs = [int(x) for x in row[:m + 1]]
                lhs = derived_form(f, m + 1, vs)
                rhs = derived_form(f, m, [vs[0] ^ vs[1]] + vs[2:]) ^ \
                    derived_form(f, m, [vs[0]] + vs[2:]) ^ derived_form(f, m, [vs[1]] + vs[2:])
                assert lhs == rhs
        # trilinearity in the first slot, and f_4 = 0, vectorized
        a, b, y, z, u = (v[:, i] for i in range(5))

        def f3(x, y, z):
            return t[x ^ y ^ z] ^ t[x ^ y] ^ t[x ^ z] ^ t[y ^ z] ^ t[x] ^ t[y] ^ t[z]
        assert np.array_equal(f3(a ^ b, y, z), f3(a, y, z) ^ f3(b, y, z))
        assert f4_sample_check(f, samples=10_000, seed=trial)
        for row in v[:100]:
            x, y2, z2 = (int(q) for q in row[:3])
            assert eval_f3(w, x, y2, z2) == derived_form(f, 3, [x, y2, z2])
            assert eval_f2(w, x, y2) == derived_form(f, 2, [x, y2])


@settings(max_examples=50)
@given(params(5))
def test_f3_alternating(w):
    for x in range(32):
        assert eval_f3(w, x, x, 7) == 0
        assert eval_f3(w, 3, x, x) == 0


def test_map_formula_matches_table(rng):
    w = ParamVector.from_sets(4, [1], ["23"], "124")
    t = map_table(w)
    for u in range(16):
        x = [(u >> i) & 1 for i in range(4)]
        assert t[u] == (x[0] ^ (x[1] & x[2]) ^ (x[0] & x[1] & x[3]))


def test_parse_format():
    assert parse_form("0", 3) == TriForm(3, 0)
    assert format_form(parse_form("123{+}345", 5)) == "123+345"
    a = parse_form("123+145+167+246+357", 7)
    assert format_form(a) == "123+145+167+246+357"
    assert format_form(parse_form("∅", 8)) == "0"
    for bad in ("12", "124+124", "321", "128", "1a3", "113"):
        with pytest.raises(FormSyntaxError):
            parse_form(bad, 7)


@settings(max_examples=200)
@given(st.integers(3, 9).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, 2**84))))
def test_parse_format_round_trip(args):
    d, bits = args
    bits &= (1 << (d * (d - 1) * (d - 2) // 6)) - 1
    a = TriForm(d, bits)
    assert parse_form(format_form(a), d) == a


def test_param_sets_round_trip(rng):
    for d in (3, 5, 8):
        w = ParamVector.random(d, rng)
        s = w.to_sets()
        assert ParamVector.from_sets(d, s["omega1"], s["omega2"], s["omega3"]) == w
        assert ParamVector.decode(d, w.encode()) == w
