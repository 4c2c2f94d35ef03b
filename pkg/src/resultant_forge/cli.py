"""Command-line entry point.

Exit codes: 0 pass, 1 verification failed, 2 input error, 3 parameter or
precondition error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import checks
from .codazzi import ConfigError, FrameConfig, SelectionError, degenerate_mu_check, vanishing_report
from .hypersurface import (
    CaseVIParams,
    CaseVParams,
    ParameterError,
    case4_check,
    lemma51_identities,
    theorem1_pipeline,
    theorem2_pipeline,
)
from .polycore import MissingAssignment, Poly, UnknownVariable, VarTable, evaluate, partial_derivative, rational
from .polyparse import ParseError, format_poly, parse_source, to_json
from .report import DEFAULT_MAX_TERMS, PASS, poly_summary, rat_str
from .resultant import DegenerateInput, PreconditionViolated, resultant_ex

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_PARAM = 0, 1, 2, 3


class InputError(Exception):
    pass


def _rat(text: str):
    try:
        return rational(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q fraction, got {text!r}") from None


def _int(text: str) -> int:
    v = _rat(text)
    if not isinstance(v, int):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return v


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _load(path: str) -> Poly:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    try:
        return parse_source(text)
    except ParseError as e:
        raise InputError(f"{path}:{e}") from None


def _common(*polys: Poly) -> List[Poly]:
    """Re-express operands over the union of their variable tables."""
    names: List[str] = []
    for p in polys:
        names += [v for v in p.vars.names if v not in names]
    vt = VarTable(names)
    return [p.reindex(vt) for p in polys]


# ------------------------------------------------------------------ commands

def cmd_resultant(args) -> int:
    f, g = _load(args.f), _load(args.g)
    for path, p in ((args.f, f), (args.g, g)):
        if args.var not in p.vars:
            raise InputError(f"{path}: variable {args.var!r} is not declared")
    f, g = _common(f, g)
    res = resultant_ex(f, g, args.var, args.det)
    payload = {
        "var": args.var,
        "deg_f": res.m,
        "deg_g": res.n,
        "method": res.method,
        "notes": res.notes,
        "resultant": poly_summary(res.value, args.max_terms),
    }
    _emit(args, payload, format_poly(res.value))
    return EXIT_PASS


def _report_text(rep, timing: bool = True) -> str:
    lines = [f"{rep.case} {json.dumps(rep.params)}"]
    for s in rep.stages:
        degs = " ".join(f"{k}:{v}" for k, v in s.poly.degree_map().items()) or "const"
        t = f" {s.millis:9.1f} ms" if timing else ""
        lines.append(f"  {s.name:<22} terms={len(s.poly):<7} deg[{degs}]{t}")
    for k, v in rep.proportionality_constants.items():
        lines.append(f"  ratio {k} = {v}")
    for d in rep.printed_vs_derived_diffs:
        lines.append(f"  note: {d}")
    lines.append(f"verdict: {rep.verdict}")
    return "\n".join(lines)


def _finish_pipeline(args, rep) -> int:
    if args.json:
        print(rep.to_json(args.max_terms, timing=args.timing))
    else:
        print(_report_text(rep))
    return EXIT_PASS if rep.verdict == PASS else EXIT_FAIL


def cmd_theorem1(args) -> int:
    params = CaseVParams(args.n, args.r, args.mu, symbolic_mu=args.symbolic_mu)
    return _finish_pipeline(args, theorem1_pipeline(params, args.det))


def cmd_theorem2(args) -> int:
    params = CaseVIParams(args.n, args.r, args.s, args.mu, args.k1)
    return _finish_pipeline(args, theorem2_pipeline(params, args.det))


def cmd_case4(args) -> int:
    out = case4_check(args.n, args.mu)
    _emit(args, out, f"constraint: {out['constraint']} = 0\nsolutions: {out['solutions']}\nverdict: {out['verdict']}")
    return EXIT_PASS if out["verdict"] == PASS else EXIT_FAIL


def cmd_identities(args) -> int:
    out = lemma51_identities(CaseVIParams(args.n, args.r, args.s, args.mu))
    ok = out["all_hold"]
    text = "\n".join(f"  {r['identity']}: {'holds' if r['holds'] else 'FAILS'}" for r in out["identities"])
    text += "".join(f"\n  note: {n}" for n in out["notes"])
    _emit(args, out, f"{text}\nverdict: {PASS if ok else 'FAIL'}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_codazzi(args) -> int:
    lams = [v.strip() for v in args.lambdas.split(",") if v.strip()] if args.lambdas else list(range(1, args.n - 2))
    cfg = FrameConfig(args.n, tuple(_rat(v) for v in lams), args.mu, args.H,
                      post_lemma33=not args.no_post_lemma33,
                      keep_derivatives=args.keep_derivatives, convention=args.convention)
    if args.degenerate_mu:
        out = degenerate_mu_check(cfg)
        _emit(args, out, json.dumps(out, indent=2))
        return EXIT_PASS if out["verdict"] == PASS else EXIT_FAIL
    rep = vanishing_report(cfg, args.rows)
    d = rep.to_dict()
    text = (f"n={cfg.n} convention={cfg.convention} unknowns={d['unknown_count']} nullspace_dim={d['nullspace_dim']}\n"
            f"forced zero: {len(d['forced_zero'])}, expected: {len(d['expected_zero'])}, missing: {d['missing']}\n"
            f"survivors among stated exceptions: {[e for e in d['exceptions'] if e not in d['exceptions_forced']]}\n"
            f"verdict: {rep.verdict}")
    _emit(args, d, text)
    return EXIT_PASS if rep.verdict == PASS else EXIT_FAIL


def cmd_selfcheck(args) -> int:
    out = checks.selfcheck(args.seed, args.scale)
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        for p in out["properties"]:
            print(f"  {p['name']:<48} {p['cases']:>4} cases  {p['failures']} failures")
            if "first_failure" in p:
                print(f"    first failure: {p['first_failure']}")
        print(f"verdict: {out['verdict']}")
    return EXIT_PASS if out["verdict"] == PASS else EXIT_FAIL


def cmd_poly(args) -> int:
    if args.op == "eval":
        p = _load(args.files[0])
        point = {}
        for item in args.at:
            name, _, val = item.partition("=")
            if not _:
                raise InputError(f"expected name=value, got {item!r}")
            point[name.strip()] = _rat(val)
        value = evaluate(p, point)
        _emit(args, {"value": rat_str(value)}, rat_str(value))
        return EXIT_PASS
    if args.op in ("add", "mul"):
        if len(args.files) != 2:
            raise InputError(f"poly {args.op} takes two files")
        f, g = _common(*(_load(x) for x in args.files))
        out = f + g if args.op == "add" else f * g
    else:
        if not args.var:
            raise InputError("poly diff needs --var")
        out = _load(args.files[0])
        if args.var not in out.vars:
            raise InputError(f"variable {args.var!r} is not declared")
        out = partial_derivative(out, args.var)
    _emit(args, to_json(out), format_poly(out))
    return EXIT_PASS


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--det", choices=["auto", "minor", "bareiss"], default="auto",
                        help="determinant algorithm (default: size heuristic)")
    common.add_argument("--max-terms", type=_int, default=DEFAULT_MAX_TERMS,
                        help="print polynomials up to this many terms, hash beyond")
    common.add_argument("--timing", action="store_true", help="include wall-clock per stage in JSON")

    ap = argparse.ArgumentParser(prog="resultant-forge", description="Exact resultant elimination and frame checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resultant", parents=[common], help="Sylvester resultant of two polynomial files")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--var", required=True)
    p.set_defaults(func=cmd_resultant)

    p = sub.add_parser("theorem1", parents=[common], help="five-curvature elimination")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--r", type=_int, required=True)
    p.add_argument("--mu", type=_rat, default=1)
    p.add_argument("--symbolic-mu", action="store_true")
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("theorem2", parents=[common], help="six-curvature elimination chain")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--r", type=_int, required=True)
    p.add_argument("--s", type=_int, required=True)
    p.add_argument("--mu", type=_rat, default=1)
    p.add_argument("--k1", type=_rat, default=5)
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("case4", parents=[common], help="four-curvature minimality check")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--mu", type=_rat, default=1)
    p.set_defaults(func=cmd_case4)

    p = sub.add_parser("identities", parents=[common], help="gradient-solution identities, six curvatures")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--r", type=_int, required=True)
    p.add_argument("--s", type=_int, required=True)
    p.add_argument("--mu", type=_rat, default=1)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("codazzi", parents=[common], help="connection-coefficient vanishing by nullspace")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--lambdas", help="comma-separated lambda_3..lambda_{n-1} (default 1,2,...)")
    p.add_argument("--mu", type=_rat, default=1)
    p.add_argument("--H", type=_rat, default=1)
    p.add_argument("--rows", default="all", help="row selection, e.g. 'C23,C24[3,4],sym' or 'all'")
    p.add_argument("--convention", choices=["auto", "lorentz", "uniform"], default="auto")
    p.add_argument("--keep-derivatives", action="store_true")
    p.add_argument("--no-post-lemma33", action="store_true", help="do not assume lambda = 0 and constant curvatures")
    p.add_argument("--degenerate-mu", action="store_true", help="run the lambda_a^2 = mu^2 case analysis")
    p.set_defaults(func=cmd_codazzi)

    p = sub.add_parser("selfcheck", parents=[common], help="seeded property suite")
    p.add_argument("--seed", type=_int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="multiply case counts")
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("poly", parents=[common], help="polynomial utilities")
    p.add_argument("op", choices=["eval", "add", "mul", "diff"])
    p.add_argument("files", nargs="+")
    p.add_argument("--var")
    p.add_argument("--at", nargs="*", default=[], metavar="NAME=VALUE")
    p.set_defaults(func=cmd_poly)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, UnknownVariable, MissingAssignment, SelectionError,
            argparse.ArgumentTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ParameterError, ConfigError, DegenerateInput, PreconditionViolated) as e:
        print(f"parameter error: {e}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
