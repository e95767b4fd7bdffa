import pytest

from codeloops import gf2
from codeloops.glaction import act3, build_action
from codeloops.groupkit import (BudgetExhausted, RandomSampler, StabChain, bsgs_build, membership,
                                small_generating_set, stabilizer_birthday)
from codeloops.polarization import parse_form


def test_orders_and_membership(rng):
    g = bsgs_build(gf2.gl_generators(4))
    assert g.order == 20160
    for _ in range(20):
        assert membership(g, gf2.random_invertible(4, rng))
    # the subgroup of permutation matrices
    perms = bsgs_build([gf2.permutation_matrix([1, 0, 2, 3]), gf2.permutation_matrix([1, 2, 3, 0])])
    assert perms.order == 24
    assert gf2.permutation_matrix([3, 2, 1, 0]) in perms
    assert (0b11, 0b10, 0b100, 0b1000) not in perms


def test_decompose(rng):
    g = bsgs_build(gf2.gl_generators(5))
    x = gf2.random_invertible(5, rng)
    parts = g.decompose(x)
    prod = gf2.identity(5)
    for u in parts:
        prod = gf2.mat_mul(u, prod)
    assert prod == x


def test_sampler_is_reproducible_and_lands_in_group():
    g = bsgs_build(gf2.gl_generators(5))
    a = [RandomSampler(g, 7).random_element() for _ in range(3)]
    s1, s2 = RandomSampler(g, 7), RandomSampler(g, 7)
    assert [next(s1) for _ in range(5)] == [next(s2) for _ in range(5)]
    assert all(x in g for x in a)


def test_sampler_uniform_on_small_group():
    g = bsgs_build(gf2.gl_generators(3))
    s = RandomSampler(g, 1)
    counts = {}
    for _ in range(168 * 60):
        x = s.random_element()
        counts[x] = counts.get(x, 0) + 1
    assert len(counts) == 168
    assert max(counts.values()) < 3 * 60


def test_small_generating_set():
    g = bsgs_build(gf2.gl_generators(6))
    gens = small_generating_set(g, seed=3)
    assert bsgs_build(gens, 6).order == g.order
    assert small_generating_set(StabChain(4)) == []


def test_extend_until_budget():
    h = StabChain(4)
    ident = iter(lambda: gf2.identity(4), None)
    with pytest.raises(BudgetExhausted):
        h.extend_until(ident, 2, 10)


def _act(g, a):
    return act3(build_action(g), a)


@pytest.mark.parametrize("d,form,order", [(5, "123", 64512), (6, "123+456", 56448)])
def test_birthday_with_known_order(d, form, order):
    g = bsgs_build(gf2.gl_generators(d))
    a = parse_form(form, d).bits
    h = stabilizer_birthday(g, a, _act, known_order=order, seed=5)
    assert h.order == order
    for x in h.strong_generators:
        assert _act(x, a) == a


def test_birthday_saturation_gives_subgroup():
    g = bsgs_build(gf2.gl_generators(5))
    a = parse_form("123", 5).bits
    h = stabilizer_birthday(g, a, _act, seed=9)
    assert 64512 % h.order == 0
    assert h.order == 64512


def test_birthday_budget():
    g = bsgs_build(gf2.gl_generators(6))
    a = parse_form("123+456", 6).bits
    with pytest.raises(BudgetExhausted):
        stabilizer_birthday(g, a, _act, known_order=56448, seed=1, budget=50)
