"""Command-line front end.

Every subcommand emits one JSON document (schema "stingray-lab/1") to
stdout or --out.  Exact quantities are emitted as rational strings, never
floats; Monte Carlo estimates are floats with explicit trial counts.
Output is byte-reproducible for a given (argv, seed), independent of the
thread count.

Exit codes: 0 success, 1 usage/guard error, 2 statistical bound violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import counting
from .counting import rat_str
from .gf import ppd_set

DEFAULT_SEED = 0xC0FFEE
SCHEMA = "stingray-lab/1"


def _emit(doc: dict, out_path: str | None) -> None:
    doc = {"schema": SCHEMA, **doc}
    text = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _thread_count(args) -> int:
    env = os.environ.get("STINGRAY_THREADS")
    n = int(env) if env else getattr(args, "threads", 1)
    if n < 1:
        raise ValueError("thread count must be >= 1")
    return n


def _add_common(p, seed=True):
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.add_argument("--threads", type=int, default=1)
    if seed:
        p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stingraylab")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ppd", help="primitive prime divisors of Q^e - 1")
    p.add_argument("Q", type=int)
    p.add_argument("e", type=int)
    _add_common(p, seed=False)

    p = sub.add_parser("scan", help="sample until a ppd-stingray certificate appears")
    p.add_argument("X", choices=["L", "U", "Sp", "O+", "O-", "Oo"])
    p.add_argument("n", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--elo", type=int, default=2)
    p.add_argument("--ehi", type=int, default=0, help="default n-1")
    _add_common(p)

    p = sub.add_parser("duo-mc", help="Monte Carlo generating-duo proportion")
    p.add_argument("X", choices=["L", "U", "Sp", "O+", "O-", "Oo"])
    p.add_argument("d", type=int)
    p.add_argument("q", type=int)
    p.add_argument("e1", type=int)
    p.add_argument("e2", type=int)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--structural-fallback", action="store_true")
    _add_common(p)

    p = sub.add_parser("count", help="exact counting formulas (rational output)")
    p.add_argument("formula",
                   choices=["omega", "delta", "gamma", "subspaces", "torus",
                            "class-size", "centralizer", "partners",
                            "rho-bound", "prob", "alt-overlap", "alt-bound"])
    p.add_argument("params", nargs="*")
    _add_common(p, seed=False)

    p = sub.add_parser("oracle", help="brute-force ground truth (slow tier)")
    p.add_argument("formula",
                   choices=["subspaces", "nondegenerate", "pairs", "rho"])
    p.add_argument("params", nargs="*")
    _add_common(p)

    p = sub.add_parser("embed", help="find a naturally embedded classical subgroup")
    p.add_argument("X", choices=["L", "U", "Sp", "O+", "O-", "Oo"])
    p.add_argument("n", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--log-base", type=float, default=math.e)
    _add_common(p)

    p = sub.add_parser("alt", help="alternating-group analogue")
    altsub = p.add_subparsers(dest="alt_command", required=True)
    pa = altsub.add_parser("overlap")
    pa.add_argument("n", type=int)
    pa.add_argument("p", type=int)
    pa.add_argument("r", type=int)
    pa.add_argument("--trials", type=int, default=0,
                    help="0 = exact value only")
    _add_common(pa)
    pb = altsub.add_parser("embed")
    pb.add_argument("n", type=int)
    pb.add_argument("--p", type=int, default=3)
    pb.add_argument("--r", type=int, default=5)
    pb.add_argument("--budget", type=int, default=200)
    _add_common(pb)

    p = sub.add_parser("bounds", help="generating-duo lower bound with per-class breakdown")
    p.add_argument("X", choices=["L", "U", "Sp", "O+", "O-", "Oo"])
    p.add_argument("d", type=int)
    p.add_argument("q", type=int)
    p.add_argument("e1", type=int)
    p.add_argument("e2", type=int)
    _add_common(p, seed=False)
    return ap


def _cmd_ppd(args) -> int:
    _emit({"Q": args.Q, "e": args.e,
           "ppd": sorted(ppd_set(args.Q, args.e))}, args.out)
    return 0


def _cmd_scan(args) -> int:
    from .classical import ClassicalGroup, Sampler
    from .stingray import stingray_scan
    group = ClassicalGroup(args.X, args.n, args.q)
    ehi = args.ehi or args.n - 1
    sampler = Sampler(group, seed=args.seed)
    for i in range(args.budget):
        cert = stingray_scan(sampler.sample(), group, args.elo, ehi)
        if cert is not None:
            _emit({"X": args.X, "n": args.n, "q": args.q,
                   "samples": i + 1, "certificate": cert.to_record()},
                  args.out)
            return 0
    _emit({"X": args.X, "n": args.n, "q": args.q,
           "samples": args.budget, "certificate": None}, args.out)
    return 0


def _cmd_duo_mc(args) -> int:
    from .pipeline import mc_rho_gen
    _thread_count(args)
    report = mc_rho_gen(args.X, args.d, args.q, args.e1, args.e2,
                        trials=args.trials, seed=args.seed,
                        structural_fallback=args.structural_fallback)
    est = report.estimate
    _emit({"X": args.X, "d": args.d, "q": args.q,
           "e1": args.e1, "e2": args.e2,
           "rho_hat": est.point, "trials": est.trials,
           "wilson95": list(est.wilson),
           "bound": None if report.bound is None else rat_str(report.bound),
           "bound_float": None if report.bound is None else float(report.bound),
           "rejected_pairs": report.rejected,
           "irreducible_conditional": report.irreducible.to_json_dict(),
           "pass": report.passed}, args.out)
    return 0 if report.passed else 2


def _cmd_count(args) -> int:
    f, ps = args.formula, args.params
    if f == "omega":
        k, d, q = map(int, ps[:3])
        sign = -1 if len(ps) > 3 and ps[3] == "-" else 1
        val = counting.omega(k, d, q, sign)
    elif f == "delta":
        k, d, q = map(int, ps[:3])
        sign = -1 if len(ps) > 3 and ps[3] == "-" else 1
        val = counting.delta(k, d, q, sign)
    elif f == "gamma":
        e1, e2, q = map(int, ps[:3])
        eps = -1 if len(ps) > 3 and ps[3] == "-" else 1
        val = counting.gamma_eps(e1, e2, q, eps)
    elif f == "subspaces":
        d, q, e = map(int, ps[:3])
        val = counting.num_subspaces(d, q, e, ps[3])
    elif f == "torus":
        val = counting.torus_order(ps[0], int(ps[1]), int(ps[2]))
    elif f == "class-size":
        d, q, e = map(int, ps[:3])
        val = counting.class_size(d, q, e, ps[3])
    elif f == "centralizer":
        d, q, e = map(int, ps[:3])
        val = counting.centralizer_order(d, q, e, ps[3])
    elif f == "partners":
        d, q, e1 = map(int, ps[:3])
        lo, hi = counting.duo_partner_count(d, q, e1, ps[3])
        _emit({"formula": f, "params": ps,
               "lower": rat_str(lo), "upper": rat_str(hi)}, args.out)
        return 0
    elif f == "rho-bound":
        val = counting.rho_gen_lower_bound(ps[0], int(ps[1]), int(ps[2]),
                                           int(ps[3]), int(ps[4]))
    elif f == "prob":
        val = counting.prob_i_upper(int(ps[0]), ps[1], int(ps[2]),
                                    int(ps[3]), int(ps[4]), int(ps[5]))
    elif f == "alt-overlap":
        val = counting.alt_overlap_proportion(int(ps[0]), int(ps[1]),
                                              int(ps[2]))
    elif f == "alt-bound":
        val = counting.alt_overlap_lower_bound(int(ps[0]), int(ps[1]),
                                               int(ps[2]))
    else:  # pragma: no cover
        raise ValueError(f"unknown formula {f}")
    _emit({"formula": f, "params": ps,
           "exact": rat_str(Fraction(val))}, args.out)
    return 0


def _cmd_oracle(args) -> int:
    from . import oracle
    f, ps = args.formula, args.params
    if f == "subspaces":
        from .classical import ClassicalGroup
        d, q, e = map(int, ps[:3])
        gtype = ps[3] if len(ps) > 3 else "L"
        group = ClassicalGroup(gtype, d, q)
        n = sum(1 for _ in oracle.enumerate_subspaces(group.field, d, e))
        _emit({"formula": f, "params": ps, "count": n}, args.out)
        return 0
    if f == "nondegenerate":
        d, q, e = map(int, ps[:3])
        r = oracle.count_nondegenerate(d, q, e, ps[3],
                                       ps[4] if len(ps) > 4 else None)
        _emit({"formula": f, "params": ps, "count": r.value,
               "universe": r.universe}, args.out)
        return 0
    if f == "pairs":
        d, q, e = map(int, ps[:3])
        r = oracle.count_complement_pairs(d, q, e, ps[3])
        _emit({"formula": f, "params": ps, **r.value,
               "universe": r.universe}, args.out)
        return 0
    if f == "rho":
        from .classical import ClassicalGroup
        gtype = ps[0]
        d, q, e1, e2 = map(int, ps[1:5])
        group = ClassicalGroup(gtype, d, q)
        r = oracle.exhaustive_rho_gen(group, e1, e2, seed=args.seed)
        _emit({"formula": f, "params": ps, **r.value,
               "elements": r.universe}, args.out)
        return 0
    raise ValueError(f"unknown formula {f}")


def _cmd_embed(args) -> int:
    from .pipeline import embed
    _thread_count(args)
    result = embed(args.X, args.n, args.q, args.budget, seed=args.seed,
                   log_base=args.log_base)
    if result is None:
        _emit({"X": args.X, "n": args.n, "q": args.q,
               "budget": args.budget, "success": False}, args.out)
        return 0
    _emit({"success": True, **result.to_json_dict()}, args.out)
    return 0


def _cmd_alt(args) -> int:
    if args.alt_command == "overlap":
        exact = counting.alt_overlap_proportion(args.n, args.p, args.r)
        doc = {"n": args.n, "p": args.p, "r": args.r,
               "exact": rat_str(exact),
               "lower_bound": rat_str(
                   counting.alt_overlap_lower_bound(args.n, args.p, args.r))}
        if args.trials:
            from .altgrp import mc_overlap
            est = mc_overlap(args.n, args.p, args.r, args.trials,
                             seed=args.seed)
            doc["estimate"] = est.to_json_dict()
        _emit(doc, args.out)
        return 0
    # alt embed
    from .altgrp import CycleCert, Perm, step3_search
    n, p, r = args.n, args.p, args.r
    g = CycleCert(Perm.from_cycles(n, [list(range(p))]), p,
                  tuple(range(p)))
    h = CycleCert(Perm.from_cycles(n, [list(range(p, p + r))]), r,
                  tuple(range(p, p + r)))
    res = step3_search(g, h, args.budget, seed=args.seed)
    if res is None:
        _emit({"n": n, "p": p, "r": r, "budget": args.budget,
               "success": False}, args.out)
        return 0
    gx, verdict = res
    _emit({"n": n, "p": p, "r": r, "success": True,
           "support": list(gx.support),
           "verdict": {"kind": verdict.kind, "k": verdict.k,
                       "order": str(verdict.order)}}, args.out)
    return 0


def _cmd_bounds(args) -> int:
    bound = counting.rho_gen_lower_bound(args.X, args.d, args.q,
                                         args.e1, args.e2)
    breakdown = {}
    for i in range(1, 10):
        try:
            breakdown[str(i)] = rat_str(
                counting.prob_i_upper(i, args.X, args.q, args.d,
                                      args.e1, args.e2))
        except (ValueError, KeyError):
            breakdown[str(i)] = None
    _emit({"X": args.X, "d": args.d, "q": args.q,
           "e1": args.e1, "e2": args.e2,
           "rho_lower_bound": rat_str(bound),
           "rho_lower_bound_float": float(bound),
           "class_breakdown": breakdown}, args.out)
    return 0


_DISPATCH = {"ppd": _cmd_ppd, "scan": _cmd_scan, "duo-mc": _cmd_duo_mc,
             "count": _cmd_count, "oracle": _cmd_oracle, "embed": _cmd_embed,
             "alt": _cmd_alt, "bounds": _cmd_bounds}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, KeyError, IndexError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
