"""One test per acceptance criterion, each reporting a PASS/FAIL line."""
import random
import time
from math import comb

import numpy as np

from codeloops import gf2
from codeloops.cli import main as cli_main
from codeloops.formscat import catalogue
from codeloops.glaction import act_full, act_pointwise, build_action
from codeloops.loopkit import (code_from_rows, code_to_params, extract_PCA, hamming_code,
                               is_associative, is_doubly_even, is_moufang, loop_from_params,
                               NotDoublyEven)
from codeloops.polarization import (ParamVector, check_f4_zero, derived_form, f4_vanishes_on,
                                    map_from_params, params_from_map)
from codeloops.stratifier import (MemoryBudgetExceeded, all_elements, birthday_form_stabilizer,
                                  brute_force_orbits, enumerate_all, verify_index_sum)


def test_criterion_1_small_dimensions(acceptance_line, capsys):
    t0 = time.perf_counter()
    rc = cli_main(["report", "--dim-range", "1..5", "--format", "json"])
    out = capsys.readouterr().out
    import json
    rows = json.loads(out)["rows"]
    elapsed = time.perf_counter() - t0
    loops = [int(r["loops"]) for r in rows]
    small = [r["small_frattini"] for r in rows]
    ok = rc == 0 and loops == [2, 4, 10, 23, 88] and small == [2, 4, 5, 7, 8] and elapsed < 60
    acceptance_line(1, ok, f"l = {loops}, s = {small}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_dimension_6(acceptance_line):
    t0 = time.perf_counter()
    rep = enumerate_all(6)
    elapsed = time.perf_counter() - t0
    by_id = {f.table_id: f for f in rep.forms}
    loops = [by_id[i].loops for i in range(6)]
    orders = [by_id[i].stabilizer_order for i in range(6)]
    ok = rep.total == 767 and loops == [10, 52, 174, 224, 234, 73] and \
        orders == [20158709760, 14450688, 368640, 56448, 43008, 120960] and elapsed < 1800
    acceptance_line(2, ok, f"l = {rep.total}, per form {loops}, orders {orders}, {elapsed:.1f}s")
    assert ok


def test_criterion_3_dimension_7(acceptance_line):
    t0 = time.perf_counter()
    rep = enumerate_all(7)
    elapsed = time.perf_counter() - t0
    by_id = {f.table_id: f for f in rep.forms}
    cat = {e.id: e for e in catalogue(7)}
    orders_ok = all(by_id[i].stabilizer_order == cat[i].published_stabilizer_order for i in cat)
    c_orbits = [by_id[i].c_orbits for i in range(12)]
    chains = [(f.form, f.stabilizer_order) for f in rep.forms]
    index_ok = verify_index_sum(chains, 7) and \
        sum(gf2.gl_order(7) // o for _, o in chains) == 2 ** 35
    ok = rep.total == 80826 and orders_ok and index_ok and \
        c_orbits == [4, 13, 40, 53, 57, 23, 289, 69, 634, 23, 324, 67] and elapsed < 12 * 3600
    acceptance_line(3, ok, f"l = {rep.total}, stabilizer orders match: {orders_ok}, "
                           f"index sum 2^35: {index_ok}, C_A = {c_orbits}, {elapsed:.0f}s")
    assert ok


def test_criterion_4_dimension_8_partial(acceptance_line):
    """d = 8 is gated; stabilizers computed for a few catalogue forms must
    satisfy Lagrange and cannot overshoot the index sum."""
    gated = False
    try:
        enumerate_all(8)
    except MemoryBudgetExceeded:
        gated = True
    g = gf2.gl_order(8)
    results = []
    for e in catalogue(8)[:3]:
        h = birthday_form_stabilizer(e.form, seed=e.id)
        results.append((e, h.order))
    lagrange = all(g % o == 0 for _, o in results)
    partial = sum(g // o for _, o in results)
    match = all(o == e.published_stabilizer_order for e, o in results)
    ok = gated and lagrange and partial <= 2 ** 56 and match
    acceptance_line(4, ok, f"gated without allow_heavy: {gated}; {len(results)} d = 8 stabilizers, "
                           f"Lagrange {lagrange}, partial index sum <= 2^56, match published {match}")
    assert ok


def test_criterion_5_brute_force_oracle(acceptance_line):
    t0 = time.perf_counter()
    same = all(brute_force_orbits(d).to_dict(True) == enumerate_all(d).to_dict(True)
               for d in (3, 4))
    tw = brute_force_orbits(3, transposed=True)
    twisted = tw.to_dict(True) == enumerate_all(3).to_dict(True)
    elapsed = time.perf_counter() - t0
    ok = same and twisted and elapsed < 300
    acceptance_line(5, ok, f"d = 3, 4 field-by-field: {same}; twisted d = 3: {twisted}; {elapsed:.1f}s")
    assert ok


def test_criterion_6_polarization(acceptance_line):
    failures = 0
    for d in range(1, 5):
        n = d + comb(d, 2) + comb(d, 3)
        for code in range(1 << n):
            w = ParamVector.decode(d, code)
            failures += params_from_map(map_from_params(w)) != w
    samples = 10_000
    for d in (6, 7, 8):
        rng = random.Random(600 + d)
        npr = np.random.default_rng(600 + d)
        w = ParamVector.random(d, rng)
        f = map_from_params(w)
        t = f.table
        v = npr.integers(0, 1 << d, size=(samples, 5))

        def fm(m, cols):
            acc = np.zeros(samples, dtype=np.uint8)
            for mask in range(1, 1 << m):
                s = np.zeros(samples, dtype=np.int64)
                for i in range(m):
                    if (mask >> i) & 1:
                        s ^= cols[i]
                acc ^= t[s]
            return acc
        c = [v[:, i] for i in range(5)]
        for m in (1, 2, 3):
            lhs = fm(m + 1, c[:m + 1])
            rhs = fm(m, [c[0] ^ c[1]] + c[2:m + 1]) ^ fm(m, [c[0]] + c[2:m + 1]) \
                ^ fm(m, [c[1]] + c[2:m + 1])
            failures += int((lhs != rhs).sum())
        f3 = fm(3, [c[0] ^ c[3], c[1], c[2]])
        failures += int((f3 != fm(3, [c[0], c[1], c[2]]) ^ fm(3, [c[3], c[1], c[2]])).sum())
        failures += int(fm(4, c[:4]).any())
        failures += not f4_vanishes_on(f, v[:, :4])
        failures += not check_f4_zero(f)
        for row in v[:200]:
            a, b, z = (int(x) for x in row[:3])
            failures += derived_form(f, 3, [a, b, z]) != fm(3, [np.array([a]), np.array([b]),
                                                                 np.array([z])])[0]
    acceptance_line(6, failures == 0, f"{failures} failures (exhaustive d <= 4, "
                                      f"{samples} samples each at d = 6, 7, 8)")
    assert failures == 0


def test_criterion_7_loops(acceptance_line):
    t0 = time.perf_counter()
    omegas = [w for d in (3, 4) for f in enumerate_all(d).forms for w in f.representatives]
    n_canon = len(omegas)
    rng = random.Random(7)
    omegas += [ParamVector.random(5, rng) for _ in range(200)]
    failures = 0
    for w in omegas:
        t = loop_from_params(w)
        m = is_moufang(t)
        failures += not (m.holds and m.method == "exhaustive")
        failures += extract_PCA(t) != w
        if w.omega3 == 0:
            failures += not is_associative(t)
    elapsed = time.perf_counter() - t0
    ok = n_canon == 33 and failures == 0 and elapsed < 600
    acceptance_line(7, ok, f"{n_canon} canonical + 200 random loops, {failures} failures, "
                           f"{elapsed:.1f}s")
    assert ok


def test_criterion_8_action_oracle(acceptance_line):
    mismatches = 0
    cases = 0
    for s in all_elements(3):
        ad = build_action(s)
        for code in range(128):
            w = ParamVector.decode(3, code)
            mismatches += act_full(ad, w) != act_pointwise(s, w)
            cases += 1
    rng = random.Random(8)
    for _ in range(10_000):
        s = gf2.random_invertible(6, rng)
        w = ParamVector.random(6, rng)
        mismatches += act_full(build_action(s), w) != act_pointwise(s, w)
    ok = cases == 168 * 128 and mismatches == 0
    acceptance_line(8, ok, f"{cases} exhaustive d = 3 cases + 10000 d = 6 samples, "
                           f"{mismatches} mismatches")
    assert ok


def test_criterion_9_codes(acceptance_line):
    h = hamming_code()
    t = loop_from_params(code_to_params(h))
    accepted = is_doubly_even(h) and t.order == 32 and is_moufang(t).holds
    bad = code_from_rows(["11000000", "00111100"])
    try:
        code_to_params(bad)
        rejected = False
    except NotDoublyEven:
        rejected = not is_doubly_even(bad)
    ok = accepted and rejected
    acceptance_line(9, ok, f"Hamming [8,4] Moufang loop of order 32: {accepted}; "
                           f"weight-2 code rejected: {rejected}")
    assert ok
