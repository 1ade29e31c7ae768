"""Membership of Hurwitz coefficient tables in the rings Z[lambda], Z[lambda~], Z[lambda-bar].

``lambda~`` halves every symbol of odd weight; ``lambda-bar`` halves every
symbol whose exponent vector has at least two odd entries.  A monomial
``r * prod lambda^e`` lies in the rescaled ring iff ``r * 2^h`` is an integer,
``h`` counting the halved symbols with multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional

from .algebra.poly import LambdaPolynomial, LambdaRing, format_rational


class RingSpec(str, Enum):
    Z_lambda = "Z_lambda"
    Z_lambda_tilde = "Z_lambda_tilde"
    Z_lambda_bar = "Z_lambda_bar"
    Q_lambda = "Q_lambda"


def halved_tilde(symbol) -> bool:
    return symbol.weight % 2 == 1


def halved_bar(symbol) -> bool:
    return sum(e % 2 for e in symbol.exponents) >= 2


def halving_counts(ring: LambdaRing, spec: RingSpec) -> Optional[tuple]:
    """Per-symbol flag (0/1) of being halved; ``None`` for ``Q_lambda``."""
    if spec is RingSpec.Q_lambda:
        return None
    if spec is RingSpec.Z_lambda:
        return (0,) * ring.n
    test = halved_tilde if spec is RingSpec.Z_lambda_tilde else halved_bar
    return tuple(int(test(s)) for s in ring.symbols)


@dataclass(frozen=True)
class Witness:
    u_exponent: Optional[tuple]
    monomial: tuple  # exponent vector in ring symbol order
    coeff: object

    def to_json(self, ring: LambdaRing) -> dict:
        return {
            "n": None if self.u_exponent is None else list(self.u_exponent),
            "monomial": ring.monomial_json(ring.key(self.monomial)),
            "coeff": format_rational(self.coeff),
        }


def _monomial_ok(coeff, exps, halves) -> bool:
    h = sum(e for e, flag in zip(exps, halves) if flag)
    return (Fraction(coeff) * (1 << h)).denominator == 1


def check_membership(p: LambdaPolynomial, spec: RingSpec, u_exponent=None) -> list:
    """Witnesses of non-membership (empty list means ``p`` is in the ring)."""
    spec = RingSpec(spec)
    ring = p.ring
    halves = halving_counts(ring, spec)
    if halves is None:
        return []
    out = []
    for key in sorted(p.terms):
        c = p.terms[key]
        if type(c) is int:
            continue
        exps = ring.exps(key)
        if not _monomial_ok(c, exps, halves):
            out.append(Witness(None if u_exponent is None else tuple(u_exponent), exps, c))
    return out


def is_member(p: LambdaPolynomial, spec: RingSpec) -> bool:
    return not check_membership(p, spec)


def chi_condition(td) -> bool:
    """Every row ``(l_{i,1}, ..., l_{i,i-1})`` has at most one odd entry."""
    for i, row in enumerate(td.ell, start=2):
        if sum(x % 2 for x in row[: i - 1]) > 1:
            return False
    return True


@dataclass
class IntegralityReport:
    name: str
    ring: RingSpec
    verdict: str  # "pass", "fail" or "skipped"
    witnesses: list = field(default_factory=list)
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self, ring: LambdaRing) -> dict:
        out = {"name": self.name, "ring": self.ring.value, "verdict": self.verdict}
        out["witnesses"] = [w.to_json(ring) for w in self.witnesses]
        if self.reason:
            out["reason"] = self.reason
        return out


def check_table(name: str, items: Iterable, spec: RingSpec, max_witnesses: int = 20) -> IntegralityReport:
    """``items`` yields ``(u-exponent, LambdaPolynomial)``."""
    spec = RingSpec(spec)
    witnesses = []
    for n, p in items:
        witnesses.extend(check_membership(p, spec, n))
        if len(witnesses) >= max_witnesses:
            break
    return IntegralityReport(name, spec, "fail" if witnesses else "pass", witnesses[:max_witnesses])


def hurwitz_items(series):
    """``(n, zeta_n)`` for a u-series."""
    return list(series.hurwitz_items())


CHECKS = ("tilde", "bar", "square", "c")


def verify_theorems(se, checks: Iterable[str] = CHECKS, c_values=None) -> list:
    """Integrality reports for one sigma expansion.

    ``tilde``: sigma in Z[lambda~]<<u>>; ``square``: sigma^2 in Z[lambda]<<u>>;
    ``bar``: sigma in Z[lambda-bar]<<u>>, only when the chi condition holds;
    ``c``: ``2 c_k`` in Z[lambda] for the linear coefficients ``c_k``.
    """
    from .sigma_series import sigma_squared

    checks = set(checks)
    reports = []
    if "tilde" in checks:
        reports.append(check_table("sigma", hurwitz_items(se.series), RingSpec.Z_lambda_tilde))
    if "square" in checks:
        reports.append(check_table("sigma^2", hurwitz_items(sigma_squared(se)), RingSpec.Z_lambda))
    if "bar" in checks:
        if chi_condition(se.td):
            reports.append(check_table("sigma", hurwitz_items(se.series), RingSpec.Z_lambda_bar))
        else:
            reports.append(
                IntegralityReport(
                    "sigma",
                    RingSpec.Z_lambda_bar,
                    "skipped",
                    reason="chi condition fails: some l-row has two or more odd entries",
                )
            )
    if "c" in checks:
        cs = c_values if c_values is not None else se.parts.get("c", [])
        items = [((k + 1,), v.scale(2)) for k, v in enumerate(cs)]
        reports.append(check_table("2c", items, RingSpec.Z_lambda))
    return reports


def empirical_bar(se) -> IntegralityReport:
    """The Z[lambda-bar] verdict regardless of the chi condition."""
    return check_table("sigma", hurwitz_items(se.series), RingSpec.Z_lambda_bar)


def odd_coefficients_even(series_coeffs: Iterable) -> list:
    """Indices ``k`` (odd) whose coefficient is not in ``2 Z[lambda]``.

    ``series_coeffs`` yields ``(k, LambdaPolynomial)``.
    """
    bad = []
    for k, v in series_coeffs:
        if k % 2 and not all(type(c) is int and c % 2 == 0 for c in v.terms.values()):
            bad.append(k)
    return bad
