"""Curve specifications and end-to-end orchestration.

A spec is a JSON document::

    {"a": [2, 3], "lambda": "symbolic", "W": 12, "t_order": null, "b": null}

``lambda`` is ``"symbolic"``, a list of rationals in catalog order, or a dict
keyed by symbol name (missing names are zero).  Numeric runs compute
symbolically over the nonzero symbols only and substitute at the end, so every
internal check still sees polynomial data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Optional, Sequence

from .algebra.poly import LambdaRing, to_rational
from .bilinear_form import BilinearData
from .curve_model import build_curve
from .errors import InvalidCurve
from .integrality import CHECKS, verify_theorems
from .local_expansion import ExpansionSet, build_D, choose_b, int_det
from .semigroup import TelescopicData, validate_telescopic
from .sigma_series import SigmaExpansion, USeries, sigma


@dataclass
class CurveSpec:
    a: tuple
    lambdas: object = "symbolic"  # "symbolic" or {name: rational}
    W: int = 8
    t_order: Optional[int] = None
    b: Optional[tuple] = None
    td: TelescopicData = field(init=False, repr=False)

    def __post_init__(self):
        self.a = tuple(int(x) for x in self.a)
        self.td = validate_telescopic(self.a)
        lowest = sum(self.td.mu)
        if self.W < lowest:
            raise InvalidCurve(f"W = {self.W} is below the weight {lowest} of the leading Schur term")
        if self.b is not None:
            self.b = tuple(int(x) for x in self.b)
            if len(self.b) != len(self.a) or sum(x * y for x, y in zip(self.a, self.b)) != -1:
                raise InvalidCurve(f"b = {self.b} must satisfy sum a_i b_i = -1")
        self.lambdas = _parse_lambdas(self.td, self.lambdas)

    @property
    def symbolic(self) -> bool:
        return self.lambdas == "symbolic"

    def default_t_order(self) -> int:
        return self.W + 2 * self.td.genus + 2 * self.a[0] + 4

    @classmethod
    def from_json(cls, data: dict, **overrides) -> "CurveSpec":
        if not isinstance(data, dict) or "a" not in data:
            raise InvalidCurve("spec must be a JSON object with an 'a' entry")
        kw = {
            "a": data["a"],
            "lambdas": data.get("lambda", "symbolic"),
            "W": int(data.get("W", 8)),
            "t_order": data.get("t_order"),
            "b": data.get("b"),
        }
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    def to_json(self) -> dict:
        lam = "symbolic" if self.symbolic else {k: str(Fraction(v)) for k, v in self.lambdas.items()}
        return {"a": list(self.a), "lambda": lam, "W": self.W, "t_order": self.t_order, "b": None if self.b is None else list(self.b)}


def _parse_lambdas(td: TelescopicData, raw):
    if raw is None or raw == "symbolic":
        return "symbolic"
    names = [li.name for li in td.lambda_catalog]
    if isinstance(raw, (list, tuple)):
        if len(raw) != len(names):
            raise InvalidCurve(f"expected {len(names)} lambda values in catalog order, got {len(raw)}")
        raw = dict(zip(names, raw))
    if not isinstance(raw, dict):
        raise InvalidCurve("lambda must be 'symbolic', a list or an object")
    unknown = set(raw) - set(names)
    if unknown:
        raise InvalidCurve(f"unknown lambda symbols {sorted(unknown)}")
    try:
        vals = {k: to_rational(v) for k, v in raw.items()}
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidCurve(f"bad lambda value: {exc}") from None
    return {k: vals[k] for k in names if k in vals}


def load_spec(text: str, **overrides) -> CurveSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidCurve(f"spec is not valid JSON: {exc}") from None
    return CurveSpec.from_json(data, **overrides)


def info(spec: CurveSpec) -> dict:
    td = spec.td
    b = spec.b or choose_b(td)
    D = build_D(td, b)
    out = td.to_json()
    out["lambda_catalog"] = [{"name": li.name, "index": li.to_json(), "weight": li.weight} for li in td.lambda_catalog]
    out["b"] = list(b)
    out["D"] = D
    out["det_D"] = int_det(D)
    return out


@dataclass
class RunResult:
    spec: CurveSpec
    es: ExpansionSet
    bilinear: BilinearData
    sigma: SigmaExpansion  # symbolic over the active symbols
    output: SigmaExpansion  # with numeric values substituted when requested

    @property
    def td(self):
        return self.spec.td


def bilinear_cap(td: TelescopicData, W: int) -> int:
    """Weight of the largest ``q_{i,j}`` the sigma assembly can use."""
    return min(W, 4 * td.genus - 2)


def run(spec: CurveSpec, check: bool = True) -> RunResult:
    td = spec.td
    active = None if spec.symbolic else [k for k, v in spec.lambdas.items() if v]
    cm = build_curve(td, active)
    t_order = spec.t_order if spec.t_order is not None else spec.default_t_order()
    es = ExpansionSet(cm, spec.b, t_order)
    bd = BilinearData(es, bilinear_cap(td, spec.W))
    se = sigma(es, bd.q, spec.W, check)
    out = se if spec.symbolic else substitute(se, spec.lambdas)
    return RunResult(spec, es, bd, se, out)


def substitute(se: SigmaExpansion, values: dict) -> SigmaExpansion:
    ring = se.ring
    target = LambdaRing([])
    vals = {ring.index(k): v for k, v in values.items() if k in ring.names}
    terms = {n: v.substitute(vals, target) for n, v in se.series.terms.items()}
    series = USeries(target, se.series.w, se.series.W, terms)
    return SigmaExpansion(series, se.td, se.b, se.W, {})


def sigma_from_json(data: dict) -> SigmaExpansion:
    """Rebuild a symbolic sigma table from its canonical JSON."""
    try:
        td = validate_telescopic(data["curve"])
        W = int(data["W"])
        ring = LambdaRing(td.lambda_catalog)
        terms = {}
        for item in data["terms"]:
            n = tuple(int(x) for x in item["n"])
            terms[n] = ring.from_json(item["zeta"]).scale(Fraction(1, prod(factorial(k) for k in n)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidCurve(f"not a sigma table: {exc!r}") from None
    series = USeries(ring, td.gaps, W, terms)
    return SigmaExpansion(series, td, data.get("b", ()), W, {})


def check(result_or_sigma, checks: Sequence[str] = CHECKS) -> list:
    if isinstance(result_or_sigma, RunResult):
        return verify_theorems(result_or_sigma.sigma, checks)
    return verify_theorems(result_or_sigma, [c for c in checks if c != "c"])


def dumps(obj) -> str:
    """Canonical JSON text (stable key order as built, one trailing newline)."""
    return json.dumps(obj, indent=1, ensure_ascii=True) + "\n"
