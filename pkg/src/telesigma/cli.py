"""Command line front end: ``telesigma {info,expand,check} SPEC``.

SPEC is a path to a JSON curve spec, ``-`` for stdin, or the JSON text itself.
``check`` also accepts a sigma table written by ``expand``.

Exit codes: 0 ok, 1 failed integrality verdict, 2 invalid input, 3 internal
invariant violated during the pipeline.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .errors import InvalidCurve, PipelineError
from .integrality import CHECKS
from . import pipeline

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_PIPELINE = 0, 1, 2, 3

EMITS = ("sigma", "tau", "q", "omega")


def _read_spec_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.lstrip().startswith("{"):
        return arg
    try:
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidCurve(f"cannot read spec {arg!r}: {exc.strerror}") from None


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _spec(args) -> pipeline.CurveSpec:
    text = _read_spec_text(args.spec)
    return pipeline.load_spec(text, W=getattr(args, "W", None), t_order=getattr(args, "t_order", None), b=getattr(args, "b", None))


def _write(out_dir: Optional[str], name: str, obj) -> None:
    text = pipeline.dumps(obj)
    if out_dir is None:
        sys.stdout.write(text)
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_info(args) -> int:
    spec = _spec(args)
    _write(args.out, "info.json", pipeline.info(spec))
    return EXIT_OK


def _omega_json(result) -> list:
    es, td = result.es, result.td
    out = []
    for i in range(1, td.genus + 1):
        s = es.omega(i, result.spec.W)
        out.append({"i": i, "coeffs": [{"k": k, "c": v.to_json()} for k, v in s.items()]})
    return out


def cmd_expand(args) -> int:
    spec = _spec(args)
    emits = set(EMITS) if "all" in args.emit else set(args.emit)
    result = pipeline.run(spec)
    if "sigma" in emits:
        _write(args.out, "sigma.json", result.output.to_dict(with_b=False))
    if args.out is not None:
        meta = {"spec": spec.to_json(), "b": list(result.es.b), "t_order_used": result.es.order}
        _write(args.out, "meta.json", meta)
    if "tau" in emits:
        tau = result.sigma.parts["tau"]
        _write(args.out, "tau.json", {"curve": list(spec.a), "W": spec.W, "terms": tau.to_json_terms()})
    if "q" in emits:
        _write(args.out, "q.json", {"curve": list(spec.a), "cap": result.bilinear.cap, "q": result.bilinear.q.to_json()})
    if "omega" in emits:
        _write(args.out, "omega.json", {"curve": list(spec.a), "omega": _omega_json(result)})
    return EXIT_OK


def cmd_check(args) -> int:
    text = _read_spec_text(args.spec)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidCurve(f"input is not valid JSON: {exc}") from None
    checks = set(CHECKS) if "all" in args.check else set(args.check)
    if isinstance(data, dict) and "terms" in data:
        se = pipeline.sigma_from_json(data)
        reports = pipeline.check(se, sorted(checks))
        ring = se.ring
    else:
        spec = pipeline.CurveSpec.from_json(data, W=args.W, t_order=args.t_order, b=args.b)
        result = pipeline.run(spec)
        reports = pipeline.check(result, sorted(checks | {"c"}))
        ring = result.sigma.ring
    failed = False
    for r in reports:
        line = f"{r.name} in {r.ring.value}: {r.verdict}"
        if r.reason:
            line += f" ({r.reason})"
        if r.witnesses:
            w = r.witnesses[0]
            line += f"; first witness at u^{list(w.u_exponent or ())}: coefficient {w.coeff}"
        print(line)
        failed = failed or r.verdict == "fail"
    detail = {"reports": [r.to_json(ring) for r in reports]}
    if args.out is not None:
        _write(args.out, "report.json", detail)
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="telesigma", description="Sigma function expansions of telescopic curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, run_flags=True):
        p.add_argument("spec", help="curve spec JSON (path, '-' or inline text)")
        p.add_argument("--out", metavar="DIR", help="write JSON files here instead of stdout")
        if run_flags:
            p.add_argument("--W", type=int, help="u-weight truncation")
            p.add_argument("--t-order", type=int, dest="t_order", help="ceiling for the local expansion order")
            p.add_argument("--b", type=_int_list, help="local parameter exponents, e.g. 1,-1")

    p = sub.add_parser("info", help="semigroup data, coefficient catalog and D matrix")
    common(p, run_flags=False)
    p.add_argument("--b", type=_int_list, help="local parameter exponents for D")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("expand", help="run the pipeline and export coefficient tables")
    common(p)
    p.add_argument("--emit", nargs="+", choices=EMITS + ("all",), default=["sigma"])
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("check", help="integrality verdicts for a spec or a sigma table")
    common(p)
    p.add_argument("--check", nargs="+", choices=("tilde", "bar", "square", "all"), default=["all"])
    p.set_defaults(func=cmd_check)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidCurve as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PipelineError as exc:
        print(f"pipeline error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
