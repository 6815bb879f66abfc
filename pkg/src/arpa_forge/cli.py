"""Command-line entry point ``arpa-forge``.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

from .designs import (
    DesignPair,
    check_arpa,
    check_cpa,
    load_pair,
    pair_from_json,
    pair_to_json,
    pair_to_text,
    ratio,
)
from .exactmath import format_fraction
from .identities import SUITES, run_suites
from .lift import lift, materialize_lift, verify_lift, ztilde_to_json
from .lp import delta_by_bases, delta_opt, gamma, min_rstar, optimal_cpa
from .regular import RepVec, materialize, rep_vector, strip_common, to_z
from .tables import regenerate_table

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    return p


def build_parser() -> argparse.ArgumentParser:
    fmt = _fmt_parent()
    parser = _Parser(prog="arpa-forge", description="Exact ARPA/CPA constructions and checks.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("gamma", parents=[fmt], help="optimal ARPA ratio gamma(q, p, k)")
    p.add_argument("q", type=int)
    p.add_argument("p", type=int)
    p.add_argument("k", type=int)

    p = sub.add_parser("delta", parents=[fmt], help="optimal CPA ratio by both routes")
    p.add_argument("nu", type=int)
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)

    p = sub.add_parser("construct", parents=[fmt], help="optimal regular CPA")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--materialize", action="store_true", help="emit explicit arrays")
    p.add_argument("--reduce", action="store_true", help="divide by the gcd of all multiplicities")

    p = sub.add_parser("lift", parents=[fmt], help="lift a regular CPA to an ARPA")
    p.add_argument("--in", dest="path", required=True, help="CPA pair or representative vector (JSON)")

    p = sub.add_parser("verify", parents=[fmt], help="check a pair file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--kind", choices=("arpa", "cpa"))
    p.add_argument("--k", type=int)
    p.add_argument("--p", "--d", dest="budget", type=int, help="override p (ARPA) or d (CPA)")

    p = sub.add_parser("table", parents=[fmt], help="rebuild a reference table and diff it")
    p.add_argument("n", type=int, choices=(1, 2, 3, 5, 6, 7))

    p = sub.add_parser("identities", parents=[fmt], help="randomized identity suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--suite", action="append", choices=sorted(SUITES))
    return parser


# -- rendering ----------------------------------------------------------------


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _pair_csv(pair: DesignPair) -> list[list]:
    n = pair.columns
    rows = [["side", "mult"] + [f"c{j}" for j in range(n)]]
    for side, arr in (("first", pair.first), ("second", pair.second)):
        for word, mult in arr.rows:
            rows.append([side, mult, *word])
    return rows


def _flat_csv(obj: dict) -> list[list]:
    rows = [["key", "value"]]
    for key, val in obj.items():
        rows.append([key, json.dumps(val) if isinstance(val, (dict, list)) else val])
    return rows


def _emit(args, obj: dict, text: str, pair: DesignPair | None = None) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    elif args.format == "csv":
        sys.stdout.write(_csv(_pair_csv(pair) if pair is not None else _flat_csv(obj)))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _check_range(cond: bool, msg: str):
    if not cond:
        raise UsageError(msg)


# -- verbs --------------------------------------------------------------------


def _cmd_gamma(args) -> int:
    q, p, k = args.q, args.p, args.k
    _check_range(1 <= k <= p <= q, "need 1 <= k <= p <= q")
    value = gamma(q, p, k)
    if p == q:
        seq, rstar = None, 1
    else:
        _, s = delta_opt(q, p, k)
        seq, rstar = list(s.i), min_rstar(s)
    obj = {"q": q, "p": p, "k": k, "gamma": format_fraction(value), "sequence": seq, "r_star": rstar}
    text = format_fraction(value)
    text += "\nsequence: " + (" ".join(map(str, seq)) if seq else "-")
    text += f"\nR*: {rstar}\n"
    _emit(args, obj, text)
    return 0


def _cmd_delta(args) -> int:
    nu, d, k = args.nu, args.d, args.k
    _check_range(1 <= k <= d < nu, "need 1 <= k <= d < nu")
    by_seq, s = delta_opt(nu, d, k)
    by_bases, winners = delta_by_bases(nu, d, k)
    agree = by_seq == by_bases
    obj = {
        "nu": nu,
        "d": d,
        "k": k,
        "delta": format_fraction(by_seq),
        "sequence_route": format_fraction(by_seq),
        "base_route": format_fraction(by_bases),
        "sequence": list(s.i),
        "optimal_bases": [{"Y": sorted(b.Y), "X": sorted(b.X)} for b in winners],
        "agree": agree,
    }
    text = (
        f"{format_fraction(by_seq)}\n"
        f"sequence route: {format_fraction(by_seq)} at {' '.join(map(str, s.i))}\n"
        f"base route:     {format_fraction(by_bases)} over {len(winners)} optimal base(s)\n"
        f"agree: {'yes' if agree else 'NO'}\n"
    )
    _emit(args, obj, text)
    return 0 if agree else 1


def _cmd_construct(args) -> int:
    nu, d, k = args.nu, args.d, args.k
    _check_range(1 <= k <= d < nu, "need 1 <= k <= d < nu")
    v = optimal_cpa(nu, d, k)
    if args.reduce:
        g = math.gcd(*v.y, *v.x)
        v = RepVec(nu, d, tuple(m // g for m in v.y), tuple(m // g for m in v.x), k)
    if args.materialize:
        pair = materialize(v)
        _emit(args, pair_to_json(pair), pair_to_text(pair), pair)
        return 0
    obj = v.as_dict()
    obj.update(R=v.R, r_star=v.r_star, ratio=format_fraction(Fraction(v.r_star, v.R)))
    text = (
        f"nu={nu} d={d} k={k}\n"
        f"y: {' '.join(map(str, v.y))}\n"
        f"x: {' '.join(map(str, v.x))}\n"
        f"R={v.R} R*={v.r_star} ratio={obj['ratio']}\n"
    )
    _emit(args, obj, text)
    return 0


def _load_json_or_pair(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        if "y" in obj and "x" in obj:
            return RepVec.from_dict(obj)
        return pair_from_json(obj)
    return load_pair(path)


def _cmd_lift(args) -> int:
    src = _load_json_or_pair(args.path)
    if isinstance(src, RepVec):
        if src.k is None:
            raise UsageError("the representative vector needs a strength k")
        v = src
    else:
        if src.kind != "cpa":
            raise UsageError("lift takes a CPA")
        v = rep_vector(src)
    v = strip_common(v)
    z = to_z(v)
    t, dp = lift(z)
    arpa = materialize_lift(t)
    cpa = materialize(v).scaled(t.scale)
    report = verify_lift(arpa, cpa, dp, t, z)
    verdict = check_arpa(arpa, v.nu, dp, v.k)
    ok = report.passed and verdict.passed
    obj = {
        "d_prime": dp,
        "scale": t.scale,
        "ratio": format_fraction(ratio(arpa)),
        "report": report.as_dict(),
        "arpa": pair_to_json(arpa),
        "ztilde": ztilde_to_json(t),
    }
    text = (
        pair_to_text(arpa)
        + f"# d'={dp} scale={t.scale} ratio={obj['ratio']}\n"
        + "# report: "
        + " ".join(f"{k}={v}" for k, v in report.as_dict().items() if k != "witnesses")
        + "\n"
    )
    _emit(args, obj, text, arpa)
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    pair = load_pair(args.path)
    if args.kind and args.kind != pair.kind:
        raise UsageError(f"file holds a {pair.kind} pair, not {args.kind}")
    a, b, k = pair.params
    if args.k is not None:
        k = args.k
    if args.budget is not None:
        b = args.budget
    _check_range(k >= 1, "k must be at least 1")
    check = check_arpa if pair.kind == "arpa" else check_cpa
    verdict = check(pair, a, b, k)
    obj = verdict.as_dict()
    obj["ratio"] = format_fraction(ratio(pair))
    lines = [f"{pair.kind} {a} {b} {k}: {'PASS' if verdict.passed else 'FAIL'}"]
    for name, ok in verdict.checks.items():
        wit = verdict.witnesses.get(name)
        lines.append(f"  {name}: {'ok' if ok else 'fail'}" + (f"  {json.dumps(obj['witnesses'][name])}" if wit else ""))
    lines.append(f"  ratio: {obj['ratio']}")
    _emit(args, obj, "\n".join(lines))
    return 0 if verdict.passed else 1


def _cmd_table(args) -> int:
    res = regenerate_table(args.n)
    lines = [f"table {res['table']}: {'match' if res['match'] else 'MISMATCH'}"]
    for e in res["pairs"]:
        a, b, c = e["params"]
        fs, bs = e["fixture_shape"], e["built_shape"]
        lines.append(
            f"  {e['kind']}({a},{b},{c}) fixture {e['fixture_ratio']} R={fs['R']}"
            f" | optimum {e['optimum']} | built {e['built_ratio']} R={bs['R']}"
            f" | fixture checks {'pass' if e['fixture_passes'] else 'fail ' + ','.join(e['fixture_failed'])}"
            f" | identical rows {'yes' if e['identical'] else 'no'}"
            f" | {'ok' if e['match'] else 'DIFF'}"
        )
    if args.format == "csv":
        rows = [["kind", "q", "p", "k", "fixture_ratio", "optimum", "built_ratio", "R_fixture", "R_built", "identical", "match"]]
        for e in res["pairs"]:
            rows.append([e["kind"], *e["params"], e["fixture_ratio"], e["optimum"], e["built_ratio"],
                         e["fixture_shape"]["R"], e["built_shape"]["R"], e["identical"], e["match"]])
        sys.stdout.write(_csv(rows))
    else:
        _emit(args, res, "\n".join(lines))
    return 0 if res["match"] else 1


def _cmd_identities(args) -> int:
    _check_range(args.iters >= 1, "iters must be positive")
    res = run_suites(args.seed, args.iters, args.suite)
    ok = all(r["failures"] == 0 for r in res.values())
    lines = [f"{name}: {r['cases']} cases, {r['failures']} failures" for name, r in res.items()]
    _emit(args, {"seed": args.seed, "suites": res, "passed": ok}, "\n".join(lines))
    return 0 if ok else 1


_VERBS = {
    "gamma": _cmd_gamma,
    "delta": _cmd_delta,
    "construct": _cmd_construct,
    "lift": _cmd_lift,
    "verify": _cmd_verify,
    "table": _cmd_table,
    "identities": _cmd_identities,
}


def _wants_json(argv: Sequence[str]) -> bool:
    argv = list(argv)
    return "--format=json" in argv or any(a == "--format" and b == "json" for a, b in zip(argv, argv[1:]))


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return _VERBS[args.verb](args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        message = str(exc)
        if _wants_json(argv):
            sys.stdout.write(json.dumps({"error": type(exc).__name__, "message": message}) + "\n")
        else:
            sys.stderr.write(f"arpa-forge: error: {message}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
