"""Command-line front end: ``codeloops <command> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

from . import gf2
from .formscat import catalogue, expected_totals, published
from .glaction import act_full, build_action
from .loopkit import (EncodingError, NotALoop, NotDoublyEven, code_to_params, extract_PCA,
                      is_associative, is_doubly_even, is_moufang, loop_from_params, read_code,
                      read_table, write_table)
from .polarization import ParamVector, format_form, parse_form
from .stratifier import (DEFAULT_SEED, Classifier, MemoryBudgetExceeded, VerificationError,
                         enumerate_all, enumerate_stage1, verify_index_sum)

log = logging.getLogger("codeloops")


class Failure(Exception):
    """A verification failed; the message names the identity."""


def _emit(args, payload, rows: list[dict] | None = None, text: str | None = None) -> None:
    fmt = args.format
    if fmt == "json":
        out = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    elif fmt == "csv":
        rows = rows if rows is not None else [payload]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        out = buf.getvalue()
    else:
        out = (text if text is not None else json.dumps(payload, sort_keys=True, indent=1)) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _parse_omega(spec: str, d: int) -> ParamVector:
    try:
        data = json.loads(spec)
    except json.JSONDecodeError:
        with open(spec) as fh:
            data = json.load(fh)
    return ParamVector.from_sets(d, data.get("omega1", []), data.get("omega2", []),
                                 data.get("omega3", "0"))


def _matrix_rows(g) -> list[str]:
    d = len(g)
    return ["".join(str((r >> i) & 1) for i in range(d)) for r in g]


# -- commands ---------------------------------------------------------------

def cmd_enumerate(args) -> int:
    d = args.dim
    only = None
    if args.zero_form_only:
        only = [parse_form("0", d)]
    elif args.form:
        only = [parse_form(args.form, d)]
    t0 = time.perf_counter()
    rep = enumerate_all(d, seed=args.seed, workers=args.workers, allow_heavy=args.allow_heavy,
                        only_forms=only)
    log.info("enumerated d = %d in %.1fs", d, time.perf_counter() - t0)
    payload = rep.to_dict(with_reps=args.with_reps)
    rows = [dict(dim=d, **{k: v for k, v in f.items() if k != "representatives"})
            for f in payload["forms"]]
    lines = [f"d = {d}: total {rep.total}, zero-form total {rep.zero_form_total}"]
    for f in rep.forms:
        lines.append(f"  {format_form(f.form):32s} |G_A| = {f.stabilizer_order:>18}  "
                     f"C_A = {f.c_orbits:>5}  loops = {f.loops}"
                     + (f"  [ID {f.table_id}: {f.table_form}]" if f.table_id is not None else ""))
    _emit(args, payload, rows, "\n".join(lines))
    return 0


def cmd_classify_forms(args) -> int:
    d = args.dim
    forms = enumerate_stage1(d, seed=args.seed, allow_heavy=args.allow_heavy)
    ok = verify_index_sum(forms, d)
    g = gf2.gl_order(d)
    published_orders = {}
    if d >= 3:
        published_orders = {e.form.bits: e.published_stabilizer_order for e in catalogue(d)}
    rows = []
    for a, h in forms:
        rows.append({"form": format_form(a), "stabilizer_order": str(h.order),
                     "orbit_size": str(g // h.order)})
    payload = {"dim": d, "forms": rows, "index_sum": str(sum(g // h.order for _, h in forms)),
               "index_sum_target": str(1 << (d * (d - 1) * (d - 2) // 6)), "index_sum_ok": ok}
    if d >= 7:
        payload["published_orders_match"] = all(
            published_orders.get(a.bits) == h.order for a, h in forms)
    text = "\n".join([f"{r['form']:32s} {r['stabilizer_order']:>18}" for r in rows]
                     + [f"index sum {'verified' if ok else 'FAILED'}: {payload['index_sum']}"])
    _emit(args, payload, rows, text)
    return 0 if ok and payload.get("published_orders_match", True) else 1


def cmd_build_loop(args) -> int:
    omega = _parse_omega(args.omega, args.dim)
    t = loop_from_params(omega)
    write_table(t, args.table_out)
    log.info("wrote loop of order %d to %s", t.order, args.table_out)
    return 0


def _verify_payload(t, seed: int) -> dict:
    moufang = is_moufang(t, seed=seed)
    out = {"order": t.order, "latin": True, "moufang": moufang.holds,
           "moufang_check": moufang.method, "associative": is_associative(t)}
    out["omega"] = extract_PCA(t).to_sets()
    return out


def cmd_verify_loop(args) -> int:
    try:
        t = read_table(args.table)
        payload = _verify_payload(t, args.seed)
    except NotALoop as exc:
        payload = {"latin": False, "error": str(exc)}
    except EncodingError as exc:
        payload = {"latin": True, "error": str(exc)}
    _emit(args, payload)
    return 0 if payload.get("moufang") else 1


def cmd_iso(args) -> int:
    d = args.dim
    w1 = _parse_omega(args.omega1, d)
    w2 = _parse_omega(args.omega2, d)
    clf = Classifier(d, seed=args.seed, allow_heavy=args.allow_heavy,
                     only_forms=[w1.form, w2.form])
    clf.run()
    c1, g1 = clf.canonicalize(w1)
    c2, g2 = clf.canonicalize(w2)
    payload = {"isomorphic": c1 == c2, "canonical1": c1.to_sets(), "canonical2": c2.to_sets()}
    if c1 == c2:
        # w1 = c^g1 and w2 = c^g2, so w1^(g1^-1 g2) = w2
        s = gf2.mat_mul(gf2.mat_inv(g1), g2)
        if act_full(build_action(s), w1) != w2:
            raise Failure("transporter check failed")
        payload["transporter"] = _matrix_rows(s)
    text = "isomorphic" if c1 == c2 else "not isomorphic"
    if c1 == c2:
        text += "\n" + "\n".join(payload["transporter"])
    _emit(args, payload, None, text)
    return 0


def cmd_code(args) -> int:
    c = read_code(args.code)
    payload = {"length": c.length, "dim": c.dim, "doubly_even": is_doubly_even(c)}
    if not payload["doubly_even"]:
        _emit(args, payload)
        return 1
    omega = code_to_params(c)
    payload["omega"] = omega.to_sets()
    status = 0
    if args.build:
        t = loop_from_params(omega)
        payload.update({k: v for k, v in _verify_payload(t, args.seed).items() if k != "omega"})
        if c.dim > 6:
            payload["factor_set"] = "closed form (experimental for d > 6)"
        if args.table_out:
            write_table(t, args.table_out)
        status = 0 if payload["moufang"] else 1
    _emit(args, payload)
    return status


def _parse_range(text: str) -> range:
    a, _, b = text.partition("..")
    lo, hi = int(a), int(b or a)
    return range(lo, hi + 1)


def cmd_report(args) -> int:
    dims = _parse_range(args.dim_range)
    if max(dims) > 7 and not args.allow_heavy:
        raise MemoryBudgetExceeded("dimensions above 7 need --allow-heavy")
    rows = []
    ok = True
    for d in dims:
        t0 = time.perf_counter()
        rep = enumerate_all(d, seed=args.seed, workers=args.workers, allow_heavy=args.allow_heavy)
        el, es = expected_totals(d)
        row = {"dim": d, "order": 2 << d, "loops": str(rep.total), "loops_expected": str(el),
               "loops_ok": rep.total == el, "small_frattini": rep.zero_form_total,
               "small_frattini_expected": es, "small_frattini_ok": rep.zero_form_total == es,
               "seconds": round(time.perf_counter() - t0, 2)}
        ok &= row["loops_ok"] and row["small_frattini_ok"]
        rows.append(row)
        log.info("d = %d done in %.1fs", d, row["seconds"])
    lines = [f"{'n':>5} {'l_n':>10} {'expected':>10}      {'s_n':>4} {'expected':>8}"]
    for r in rows:
        lines.append(f"{r['order']:>5} {r['loops']:>10} {r['loops_expected']:>10} "
                     f"{'PASS' if r['loops_ok'] else 'FAIL'} {r['small_frattini']:>4} "
                     f"{r['small_frattini_expected']:>8} {'PASS' if r['small_frattini_ok'] else 'FAIL'}")
    _emit(args, {"rows": rows, "ok": ok}, rows, "\n".join(lines))
    return 0 if ok else 1


def cmd_catalogue(args) -> int:
    dims = [args.dim] if args.dim else sorted({r["dim"] for r in published()["table2"]})
    rows = []
    for d in dims:
        for e in catalogue(d):
            rows.append({"dim": d, "id": e.id, "form": e.text,
                         "stabilizer_order": str(e.published_stabilizer_order),
                         "c_orbits": e.published_c_orbits, "loops": e.published_loops})
    text = "\n".join(f"{r['dim']} {r['id']:>2} {r['form']:40s} {r['stabilizer_order']:>18} "
                     f"{r['c_orbits']:>6} {r['loops']:>10}" for r in rows)
    _emit(args, {"forms": rows}, rows, text)
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--workers", type=int, default=1,
                        help="processes for per-form work (default 1)")
    common.add_argument("--memory-budget", type=int, default=None,
                        help="bytes; default from CODELOOPS_MEMORY_BUDGET or 3 GiB")
    common.add_argument("--allow-heavy", action="store_true", help="permit d = 8 runs")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write results here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="codeloops", description="Enumerate and verify code loops.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="count code loops of order 2^(d+1)")
    s.add_argument("--dim", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--form", help='restrict to one associator class, e.g. "123+345"')
    g.add_argument("--zero-form-only", action="store_true")
    s.add_argument("--with-reps", action="store_true", help="include representatives in JSON")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("classify-forms", parents=[common], help="trilinear forms and stabilizers")
    s.add_argument("--dim", type=int, required=True)
    s.set_defaults(func=cmd_classify_forms)

    s = sub.add_parser("build-loop", parents=[common], help="write a loop table for omega")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--omega", required=True, help="JSON spec or a file containing it")
    s.add_argument("--table-out", required=True)
    s.set_defaults(func=cmd_build_loop)

    s = sub.add_parser("verify-loop", parents=[common], help="Latin/Moufang checks and omega")
    s.add_argument("--table", required=True)
    s.set_defaults(func=cmd_verify_loop)

    s = sub.add_parser("iso", parents=[common], help="decide isomorphism of two code loops")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--omega1", required=True)
    s.add_argument("--omega2", required=True)
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("code", parents=[common], help="code loop of a doubly even code")
    s.add_argument("--code", required=True)
    s.add_argument("--build", action="store_true")
    s.add_argument("--table-out")
    s.set_defaults(func=cmd_code)

    s = sub.add_parser("report", parents=[common], help="compare totals with published values")
    s.add_argument("--dim-range", default="1..5", help="e.g. 1..5")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("catalogue", parents=[common], help="dump the published form table")
    s.add_argument("--dim", type=int)
    s.set_defaults(func=cmd_catalogue)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s: %(message)s", stream=sys.stderr)
    if args.memory_budget is not None:
        os.environ["CODELOOPS_MEMORY_BUDGET"] = str(args.memory_budget)
    try:
        return args.func(args)
    except (VerificationError, Failure) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 2
    except (MemoryBudgetExceeded, NotDoublyEven, NotALoop, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
