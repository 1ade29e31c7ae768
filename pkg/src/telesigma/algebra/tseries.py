"""Truncated Laurent series in one variable over ``Q[lambda]``.

A series stores a dense window of coefficients starting at exponent ``lo``
and knows the last exponent ``prec`` through which it is exact; ``prec=None``
marks a finite sum known exactly (a Laurent polynomial).  Every operation
propagates the tightest valid ``prec`` and reading past it raises.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..errors import HomogeneityViolation, NonzeroRemainder, NotAUnit, TruncationExceeded
from . import poly as _poly
from .poly import LambdaPolynomial, LambdaRing, addmul, addscaled, clean


def _min_prec(*ps):
    known = [p for p in ps if p is not None]
    return min(known) if known else None


class TSeries:
    __slots__ = ("ring", "lo", "c", "prec")

    def __init__(self, ring: LambdaRing, lo: int, coeffs: Sequence[LambdaPolynomial], prec: Optional[int]):
        self.ring = ring
        self.lo = lo
        self.c = list(coeffs)
        self.prec = prec
        if prec is not None:
            # never store coefficients beyond validity
            keep = prec - lo + 1
            if keep < len(self.c):
                del self.c[max(keep, 0):]

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ring: LambdaRing, prec: Optional[int] = None) -> "TSeries":
        return cls(ring, 0, [], prec)

    @classmethod
    def one(cls, ring: LambdaRing, prec: Optional[int] = None) -> "TSeries":
        return cls.monomial(ring, 0, 1, prec)

    @classmethod
    def monomial(cls, ring: LambdaRing, exponent: int, coeff=1, prec: Optional[int] = None) -> "TSeries":
        if not isinstance(coeff, LambdaPolynomial):
            coeff = ring.const(coeff)
        return cls(ring, exponent, [coeff], prec)

    @classmethod
    def from_dict(cls, ring: LambdaRing, coeffs: dict, prec: Optional[int] = None) -> "TSeries":
        if not coeffs:
            return cls.zero(ring, prec)
        lo, hi = min(coeffs), max(coeffs)
        out = []
        for k in range(lo, hi + 1):
            v = coeffs.get(k, 0)
            out.append(v if isinstance(v, LambdaPolynomial) else ring.const(v))
        return cls(ring, lo, out, prec)

    # -- access ---------------------------------------------------------------

    @property
    def hi(self) -> int:
        """Last stored exponent (``lo - 1`` when nothing is stored)."""
        return self.lo + len(self.c) - 1

    def coeff(self, k: int) -> LambdaPolynomial:
        if self.prec is not None and k > self.prec:
            raise TruncationExceeded(f"coefficient t^{k} requested, series valid through t^{self.prec}")
        i = k - self.lo
        if 0 <= i < len(self.c):
            return self.c[i]
        return self.ring.zero

    __getitem__ = coeff

    def items(self):
        for i, v in enumerate(self.c):
            if v.terms:
                yield self.lo + i, v

    def valuation(self) -> Optional[int]:
        for k, _ in self.items():
            return k
        return None

    def leading(self):
        v = self.valuation()
        if v is None:
            raise NotAUnit("series is zero within its precision")
        return v, self.coeff(v)

    def is_zero(self) -> bool:
        return self.valuation() is None

    def truncate(self, prec: int) -> "TSeries":
        if self.prec is not None and prec > self.prec:
            raise TruncationExceeded(f"cannot raise precision from {self.prec} to {prec}")
        return TSeries(self.ring, self.lo, self.c, prec)

    def normalized(self) -> "TSeries":
        """Same series with leading and trailing zero slots stripped."""
        ks = [k for k, _ in self.items()]
        if not ks:
            return TSeries(self.ring, 0, [], self.prec)
        return TSeries(self.ring, ks[0], self.c[ks[0] - self.lo: ks[-1] - self.lo + 1], self.prec)

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        if self.prec != other.prec:
            return False
        a, b = self.normalized(), other.normalized()
        if not a.c and not b.c:
            return True
        return a.lo == b.lo and [x.terms for x in a.c] == [x.terms for x in b.c]

    def agrees_with(self, other: "TSeries", through: Optional[int] = None) -> bool:
        """Coefficientwise equality up to the common (or given) precision."""
        top = _min_prec(self.prec, other.prec, through)
        if top is None:
            top = max(self.hi, other.hi)
        start = min(self.lo, other.lo)
        return all(self.coeff(k) == other.coeff(k) for k in range(start, top + 1))

    def __repr__(self):
        body = " + ".join(f"({v})*t^{k}" for k, v in self.items()) or "0"
        tail = f" + O(t^{self.prec + 1})" if self.prec is not None else ""
        return body + tail

    # -- linear operations ----------------------------------------------------

    def _combine(self, other: "TSeries", sign: int) -> "TSeries":
        prec = _min_prec(self.prec, other.prec)
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        if prec is not None:
            hi = min(hi, prec)
        out = []
        for k in range(lo, hi + 1):
            acc = dict(self.coeff(k).terms) if k <= self.hi else {}
            if other.lo <= k <= other.hi:
                addscaled(acc, other.c[k - other.lo].terms, sign)
            out.append(LambdaPolynomial(self.ring, clean(acc)))
        return TSeries(self.ring, lo, out, prec)

    def __add__(self, other):
        return self._combine(self._coerce(other), 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(self._coerce(other), -1)

    def __rsub__(self, other):
        return self._coerce(other)._combine(self, -1)

    def __neg__(self):
        return TSeries(self.ring, self.lo, [-v for v in self.c], self.prec)

    def _coerce(self, other) -> "TSeries":
        if isinstance(other, TSeries):
            return other
        if isinstance(other, LambdaPolynomial):
            return TSeries(self.ring, 0, [other], None)
        return TSeries.monomial(self.ring, 0, other, None)

    def scale(self, s) -> "TSeries":
        """Multiply by a rational or a polynomial constant in ``t``."""
        if isinstance(s, LambdaPolynomial):
            return TSeries(self.ring, self.lo, [v * s for v in self.c], self.prec)
        return TSeries(self.ring, self.lo, [v.scale(s) for v in self.c], self.prec)

    def shift(self, n: int) -> "TSeries":
        """Multiply by ``t^n``."""
        return TSeries(self.ring, self.lo + n, self.c, None if self.prec is None else self.prec + n)

    def derivative(self) -> "TSeries":
        out = [v.scale(self.lo + i) for i, v in enumerate(self.c)]
        return TSeries(self.ring, self.lo - 1, out, None if self.prec is None else self.prec - 1)

    def map(self, f) -> "TSeries":
        return TSeries(self.ring, self.lo, [f(v) for v in self.c], self.prec)

    # -- products -------------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LambdaPolynomial)):
            return self.scale(other)
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: "TSeries", max_weight: Optional[int] = None, prec: Optional[int] = None) -> "TSeries":
        """Product, optionally truncated in ``t`` (``prec``) and in lambda-weight."""
        a, b = self, other
        lo = a.lo + b.lo
        cands = []
        if a.prec is not None:
            cands.append(a.prec + b.lo)
        if b.prec is not None:
            cands.append(b.prec + a.lo)
        if prec is not None:
            cands.append(prec)
        top = min(cands) if cands else None
        n = (a.hi + b.hi - lo + 1) if top is None else min(top - lo + 1, a.hi + b.hi - lo + 1)
        n = max(n, 0)
        acc = [dict() for _ in range(n)]
        cap = self.ring.cap_key(max_weight)
        bc = b.c
        for i, ai in enumerate(a.c):
            if not ai.terms or i >= n:
                continue
            ta = ai.terms
            for j in range(min(len(bc), n - i)):
                bj = bc[j].terms
                if bj:
                    addmul(acc[i + j], ta, bj, cap)
        out = TSeries(self.ring, lo, [LambdaPolynomial(self.ring, clean(x)) for x in acc], top)
        if _poly.grading_audit_enabled() and max_weight is None:
            _audit_product(a, b, out)
        return out

    def __pow__(self, n: int) -> "TSeries":
        return self.pow(n)

    def pow(self, n: int, max_weight: Optional[int] = None) -> "TSeries":
        if n < 0:
            return self.inverse().pow(-n, max_weight)
        result = TSeries.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, max_weight)
            n >>= 1
            if n:
                base = base.mul(base, max_weight)
        return result

    def inverse(self, prec: Optional[int] = None) -> "TSeries":
        """Multiplicative inverse; the lowest coefficient must be a nonzero rational.

        For an exact series a target ``prec`` is required, since the inverse is infinite.
        """
        v = self.valuation()
        if v is None:
            raise NotAUnit("cannot invert a series that is zero within its precision")
        lead = self.coeff(v)
        if not lead.is_constant():
            raise NotAUnit(f"leading coefficient {lead} is not a rational constant")
        if self.prec is not None:
            rel = self.prec - v
            if prec is not None:
                rel = min(rel, prec + v)
        else:
            if prec is None:
                if self.hi == v:
                    return TSeries.monomial(self.ring, -v, Fraction(1) / Fraction(lead.constant_value()))
                raise NotAUnit("inverse of a non-monomial exact series needs a target precision")
            rel = prec + v
        inv0 = Fraction(1) / Fraction(lead.constant_value())
        s = [self.coeff(v + k).terms for k in range(1, rel + 1)] if rel >= 1 else []
        r: list = [{0: _poly._norm(inv0)}]
        for k in range(1, rel + 1):
            acc: dict = {}
            for j in range(1, k + 1):
                sj = s[j - 1]
                if sj and r[k - j]:
                    addmul(acc, sj, r[k - j])
            acc = {key: -inv0 * c for key, c in acc.items()}
            r.append(clean(acc))
        return TSeries(self.ring, -v, [LambdaPolynomial(self.ring, x) for x in r], -v + rel)

    def divide(self, other: "TSeries") -> "TSeries":
        """``self / other`` for ``other`` with a rational leading coefficient."""
        if self.prec is None and other.prec is None:
            return self.exact_divide(other)
        v = other.valuation()
        if v is None:
            raise NotAUnit("division by a series that is zero within its precision")
        # inverse is needed through t^(self.prec - v - self.lo) only
        want = None if self.prec is None else self.prec - v - self.lo
        return self.mul(other.inverse(prec=want))

    def exact_divide(self, other: "TSeries") -> "TSeries":
        """Long division of a Laurent polynomial by another, asserting zero remainder."""
        if self.prec is not None or other.prec is not None:
            raise TruncationExceeded("exact_divide works on exact series only")
        num, den = self.normalized(), other.normalized()
        if not num.c:
            return TSeries.zero(self.ring)
        if not den.c:
            raise NotAUnit("division by zero series")
        lead = den.c[0]
        if not lead.is_constant():
            raise NotAUnit(f"leading coefficient {lead} is not a rational constant")
        inv0 = Fraction(1) / Fraction(lead.constant_value())
        rem = [dict(x.terms) for x in num.c]
        qlen = len(num.c) - len(den.c) + 1
        if qlen <= 0:
            raise NonzeroRemainder("divisor has larger degree than dividend")
        q = []
        for k in range(qlen):
            qk = clean({key: c * inv0 for key, c in rem[k].items()})
            q.append(qk)
            if qk:
                for j in range(len(den.c)):
                    dj = den.c[j].terms
                    if dj:
                        neg = {}
                        addmul(neg, qk, dj)
                        addscaled(rem[k + j], neg, -1)
                        clean(rem[k + j])
        if any(clean(r) for r in rem):
            raise NonzeroRemainder("exact division left a nonzero remainder")
        return TSeries(self.ring, num.lo - den.lo, [LambdaPolynomial(self.ring, x) for x in q], None)

    # -- grading --------------------------------------------------------------

    def check_homogeneous(self, degree: int, t_weight: int = -1, name: str = "series") -> None:
        """Assert coefficient of ``t^k`` has lambda-weight ``degree - t_weight*k``."""
        for k, v in self.items():
            w = degree - t_weight * k
            if not v.is_homogeneous(w):
                raise HomogeneityViolation(f"{name}: coefficient of t^{k} has weights {sorted(v.weights())}, expected {w}")


def _audit_product(a: TSeries, b: TSeries, out: TSeries) -> None:
    da, db = _series_degree(a), _series_degree(b)
    if da is None or db is None:
        return
    do = _series_degree(out)
    if do is not None and do != da + db:
        raise HomogeneityViolation(f"series product degree {do} != {da} + {db}")


def _series_degree(s: TSeries) -> Optional[int]:
    """Joint degree (deg t = -1) if every coefficient is homogeneous consistently."""
    deg = None
    for k, v in s.items():
        ws = v.weights()
        if len(ws) != 1:
            return None
        d = next(iter(ws)) - k
        if deg is None:
            deg = d
        elif deg != d:
            return None
    return deg
