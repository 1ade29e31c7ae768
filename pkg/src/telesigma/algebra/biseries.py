"""Truncated power series in two variables ``t_P, t_Q`` over ``Q[lambda]``.

Coefficients live in a sparse dict keyed by ``(i, j)`` (exponents of ``t_P``
and ``t_Q``).  Truncation is by total degree: a series with ``prec = n`` is
exact for every ``i + j <= n``.  Total degree is the natural filtration for
division by ``t_P - t_Q``, which is homogeneous of degree one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..errors import NonzeroRemainder, NotAUnit, SymmetryViolation, TruncationExceeded
from .poly import LambdaPolynomial, LambdaRing, addmul, addscaled, clean
from .tseries import TSeries, _min_prec


class BiSeries:
    __slots__ = ("ring", "c", "prec")

    def __init__(self, ring: LambdaRing, coeffs: Optional[dict] = None, prec: Optional[int] = None):
        self.ring = ring
        self.prec = prec
        coeffs = coeffs or {}
        if prec is not None:
            coeffs = {k: v for k, v in coeffs.items() if k[0] + k[1] <= prec}
        for (i, j) in coeffs:
            if i < 0 or j < 0:
                raise ValueError("BiSeries holds non-negative exponents only")
        self.c = {k: v for k, v in coeffs.items() if v.terms}

    @classmethod
    def from_raw(cls, ring, raw: dict, prec):
        return cls(ring, {k: LambdaPolynomial(ring, clean(v)) for k, v in raw.items()}, prec)

    @classmethod
    def monomial(cls, ring: LambdaRing, i: int, j: int, coeff=1, prec: Optional[int] = None) -> "BiSeries":
        if not isinstance(coeff, LambdaPolynomial):
            coeff = ring.const(coeff)
        return cls(ring, {(i, j): coeff}, prec)

    @classmethod
    def outer(cls, a: TSeries, b: TSeries) -> "BiSeries":
        """``a(t_P) * b(t_Q)`` for power series ``a``, ``b`` (no negative exponents)."""
        if (a.valuation() or 0) < 0 or (b.valuation() or 0) < 0:
            raise ValueError("outer product needs power series")
        va = max(a.valuation() or 0, 0)
        vb = max(b.valuation() or 0, 0)
        cands = []
        if a.prec is not None:
            cands.append(a.prec + vb)
        if b.prec is not None:
            cands.append(b.prec + va)
        prec = min(cands) if cands else None
        raw = {}
        for i, ai in a.items():
            for j, bj in b.items():
                if prec is None or i + j <= prec:
                    acc = {}
                    addmul(acc, ai.terms, bj.terms)
                    raw[(i, j)] = acc
        return cls.from_raw(a.ring, raw, prec)

    # -- access ---------------------------------------------------------------

    def coeff(self, i: int, j: int) -> LambdaPolynomial:
        if self.prec is not None and i + j > self.prec:
            raise TruncationExceeded(f"coefficient ({i},{j}) beyond total degree {self.prec}")
        return self.c.get((i, j), self.ring.zero)

    __getitem__ = lambda self, ij: self.coeff(*ij)

    def valuation(self) -> Optional[int]:
        return min((i + j for i, j in self.c), default=None)

    def truncate(self, prec: int) -> "BiSeries":
        if self.prec is not None and prec > self.prec:
            raise TruncationExceeded(f"cannot raise precision from {self.prec} to {prec}")
        return BiSeries(self.ring, self.c, prec)

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.prec == other.prec and {k: v.terms for k, v in self.c.items()} == {
            k: v.terms for k, v in other.c.items()
        }

    def __repr__(self):
        body = " + ".join(f"({v})*tP^{i}*tQ^{j}" for (i, j), v in sorted(self.c.items())) or "0"
        return body + (f" + O(deg {self.prec + 1})" if self.prec is not None else "")

    # -- arithmetic -----------------------------------------------------------

    def _combine(self, other: "BiSeries", sign: int) -> "BiSeries":
        prec = _min_prec(self.prec, other.prec)
        raw = {k: dict(v.terms) for k, v in self.c.items()}
        for k, v in other.c.items():
            addscaled(raw.setdefault(k, {}), v.terms, sign)
        return BiSeries.from_raw(self.ring, raw, prec)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return BiSeries(self.ring, {k: -v for k, v in self.c.items()}, self.prec)

    def scale(self, s) -> "BiSeries":
        if isinstance(s, LambdaPolynomial):
            return BiSeries(self.ring, {k: v * s for k, v in self.c.items()}, self.prec)
        return BiSeries(self.ring, {k: v.scale(s) for k, v in self.c.items()}, self.prec)

    def shift(self, di: int, dj: int) -> "BiSeries":
        """Multiply by ``t_P^di t_Q^dj`` (non-negative shifts)."""
        prec = None if self.prec is None else self.prec + di + dj
        return BiSeries(self.ring, {(i + di, j + dj): v for (i, j), v in self.c.items()}, prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LambdaPolynomial)):
            return self.scale(other)
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: "BiSeries", max_weight: Optional[int] = None) -> "BiSeries":
        va = self.valuation()
        vb = other.valuation()
        if va is None or vb is None:
            # a truncated zero is O(deg prec+1); an exact zero annihilates
            if (va is None and self.prec is None) or (vb is None and other.prec is None):
                return BiSeries(self.ring, {}, None)
            va = self.prec + 1 if va is None else va
            vb = other.prec + 1 if vb is None else vb
            return BiSeries(self.ring, {}, _min_prec(
                None if self.prec is None else self.prec + vb,
                None if other.prec is None else other.prec + va,
            ))
        cands = []
        if self.prec is not None:
            cands.append(self.prec + vb)
        if other.prec is not None:
            cands.append(other.prec + va)
        prec = min(cands) if cands else None
        cap = self.ring.cap_key(max_weight)
        raw: dict = {}
        items_b = list(other.c.items())
        for (i1, j1), v1 in self.c.items():
            for (i2, j2), v2 in items_b:
                if prec is not None and i1 + j1 + i2 + j2 > prec:
                    continue
                addmul(raw.setdefault((i1 + i2, j1 + j2), {}), v1.terms, v2.terms, cap)
        return BiSeries.from_raw(self.ring, raw, prec)

    def swap(self) -> "BiSeries":
        return BiSeries(self.ring, {(j, i): v for (i, j), v in self.c.items()}, self.prec)

    def is_symmetric(self) -> bool:
        return all(self.c.get((j, i), self.ring.zero) == v for (i, j), v in self.c.items())

    def assert_symmetric(self, name: str = "series") -> None:
        for (i, j), v in sorted(self.c.items()):
            w = self.c.get((j, i), self.ring.zero)
            if w != v:
                raise SymmetryViolation(f"{name}: coefficient ({i},{j}) = {v} but ({j},{i}) = {w}")

    # -- division -------------------------------------------------------------

    def divide_diagonal(self) -> "BiSeries":
        """Exact quotient by ``t_P - t_Q``; raises if the remainder is nonzero.

        Degree by degree: ``s[i, d-i] = q[i-1, d-i] - q[i, d-1-i]`` determines
        ``q`` from ``s[0, d], ..., s[d-1, 1]`` and leaves ``s[d, 0] = q[d-1, 0]``
        as the divisibility condition.
        """
        if self.prec is None:
            top = max((i + j for i, j in self.c), default=0)
        else:
            top = self.prec
        zero: dict = {}
        q: dict = {}
        for d in range(0, top + 1):
            prev: dict = zero  # q[i-1, d-i]
            for i in range(0, d):
                s = self.c.get((i, d - i))
                cur = dict(prev)
                if s is not None:
                    addscaled(cur, s.terms, -1)
                clean(cur)
                if cur:
                    q[(i, d - 1 - i)] = cur
                prev = cur
            last = dict(prev)
            s = self.c.get((d, 0))
            if s is not None:
                addscaled(last, s.terms, -1)
            if clean(last):
                raise NonzeroRemainder(f"not divisible by (t_P - t_Q): remainder in total degree {d}")
        prec = None if self.prec is None else self.prec - 1
        return BiSeries.from_raw(self.ring, q, prec)

    def divide(self, den: "BiSeries") -> "BiSeries":
        """Exact quotient ``self / den``.

        The leading monomial of ``den`` in the order (total degree, then
        ``t_P`` exponent) must carry a rational coefficient; the quotient is
        solved triangularly and any monomial of ``self`` not reachable from
        that leading term must cancel, otherwise ``NonzeroRemainder``.
        """
        if den.is_zero():
            raise NotAUnit("division by zero series")
        (a0, b0) = min(den.c, key=lambda k: (k[0] + k[1], k[0]))
        lead = den.c[(a0, b0)]
        if not lead.is_constant():
            raise NotAUnit(f"leading coefficient {lead} is not a rational constant")
        inv0 = Fraction(1) / Fraction(lead.constant_value())
        L = a0 + b0
        top_num = self.prec if self.prec is not None else max((i + j for i, j in self.c), default=0)
        prec = top_num - L
        if den.prec is not None:
            prec = min(prec, den.prec - L)
        rest = [(k, v.terms) for k, v in den.c.items() if k != (a0, b0)]
        x: dict = {}
        for d in range(0, prec + 1):
            for i in range(0, d + 1):
                j = d - i
                tgt = (i + a0, j + b0)
                acc = dict(self.c[tgt].terms) if tgt in self.c else {}
                for (al, be), dv in rest:
                    key = (i + a0 - al, j + b0 - be)
                    xv = x.get(key)
                    if xv is not None:
                        neg = {}
                        addmul(neg, dv, xv)
                        addscaled(acc, neg, -1)
                clean(acc)
                if acc:
                    x[(i, j)] = clean({k: c * inv0 for k, c in acc.items()})
        quotient = BiSeries.from_raw(self.ring, x, prec)
        # verify: self - den * quotient vanishes through total degree prec + L
        back = den.mul(quotient)
        for k, v in self.c.items():
            if k[0] + k[1] <= prec + L and back.c.get(k, self.ring.zero) != v:
                raise NonzeroRemainder(f"division leaves remainder at t_P^{k[0]} t_Q^{k[1]}")
        for k in back.c:
            if k[0] + k[1] <= prec + L and k not in self.c:
                raise NonzeroRemainder(f"division leaves remainder at t_P^{k[0]} t_Q^{k[1]}")
        return quotient

    def to_table(self, shift: int = 0) -> dict:
        """Coefficients as ``{(i+shift, j+shift): poly}``."""
        return {(i + shift, j + shift): v for (i, j), v in self.c.items()}
