"""Defining equations of a telescopic curve and polynomial algebra on them.

``F_i = x_i^{n_i} - prod_j x_j^{l_{i,j}} - sum lambda^{(i)}_j x^j`` for
``i = 2..m`` with ``n_i = d_{i-1}/d_i``.  Polynomials in ``x`` (or in the
doubled variable set ``x, y`` for two-point objects) carry lambda-polynomial
coefficients; weighted degree is ``deg x_k = a_k`` plus lambda-weight.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .algebra.poly import LambdaPolynomial, LambdaRing, addmul, addscaled, clean
from .errors import HomogeneityViolation, LeadingMismatch, NonzeroRemainder
from .semigroup import TelescopicData


class CurvePolynomial:
    """Sparse polynomial in ``nvars`` variables with lambda-polynomial coefficients."""

    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring: LambdaRing, nvars: int, terms: Optional[dict] = None):
        self.ring = ring
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v.terms}

    @classmethod
    def from_raw(cls, ring, nvars, raw: dict) -> "CurvePolynomial":
        return cls(ring, nvars, {k: LambdaPolynomial(ring, clean(v)) for k, v in raw.items()})

    @classmethod
    def var(cls, ring, nvars, k: int, power: int = 1) -> "CurvePolynomial":
        e = [0] * nvars
        e[k] = power
        return cls(ring, nvars, {tuple(e): ring.one})

    @classmethod
    def const(cls, ring, nvars, c) -> "CurvePolynomial":
        if not isinstance(c, LambdaPolynomial):
            c = ring.const(c)
        return cls(ring, nvars, {(0,) * nvars: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, CurvePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and {k: v.terms for k, v in self.terms.items()} == {
            k: v.terms for k, v in other.terms.items()
        }

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for e, v in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{k + 1}^{p}" if p > 1 else f"x{k + 1}" for k, p in enumerate(e) if p)
            out.append(f"({v})" + (f"*{mono}" if mono else ""))
        return " + ".join(out)

    def _combine(self, other: "CurvePolynomial", sign: int) -> "CurvePolynomial":
        raw = {k: dict(v.terms) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            addscaled(raw.setdefault(k, {}), v.terms, sign)
        return CurvePolynomial.from_raw(self.ring, self.nvars, raw)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return CurvePolynomial(self.ring, self.nvars, {k: -v for k, v in self.terms.items()})

    def scale(self, s) -> "CurvePolynomial":
        if isinstance(s, LambdaPolynomial):
            return CurvePolynomial(self.ring, self.nvars, {k: v * s for k, v in self.terms.items()})
        return CurvePolynomial(self.ring, self.nvars, {k: v.scale(s) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CurvePolynomial):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def mul(self, other: "CurvePolynomial", max_weight: Optional[int] = None) -> "CurvePolynomial":
        cap = self.ring.cap_key(max_weight)
        raw: dict = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = tuple(p + q for p, q in zip(e1, e2))
                addmul(raw.setdefault(e, {}), v1.terms, v2.terms, cap)
        return CurvePolynomial.from_raw(self.ring, self.nvars, raw)

    def pow(self, n: int) -> "CurvePolynomial":
        out = CurvePolynomial.const(self.ring, self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, k: int) -> "CurvePolynomial":
        out = {}
        for e, v in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = v.scale(e[k])
        return CurvePolynomial(self.ring, self.nvars, out)

    def remap(self, targets: Sequence[int], nvars: int) -> "CurvePolynomial":
        """Send variable ``k`` to variable ``targets[k]`` of an ``nvars``-variable ring."""
        out: dict = {}
        for e, v in self.terms.items():
            f = [0] * nvars
            for k, p in enumerate(e):
                f[targets[k]] += p
            f = tuple(f)
            out[f] = out[f] + v if f in out else v
        return CurvePolynomial(self.ring, nvars, out)

    def truncate_weight(self, max_weight: int) -> "CurvePolynomial":
        return CurvePolynomial(self.ring, self.nvars, {k: v.truncate(max_weight) for k, v in self.terms.items()})

    def divide_linear(self, k: int, l: int) -> "CurvePolynomial":
        """Exact quotient by ``x_k - x_l`` (synthetic division in ``x_k``)."""
        by_power: dict = {}
        for e, v in self.terms.items():
            rest = list(e)
            p = rest[k]
            rest[k] = 0
            by_power.setdefault(p, {})[tuple(rest)] = v
        if not by_power:
            return CurvePolynomial(self.ring, self.nvars)
        top = max(by_power)
        zero = CurvePolynomial(self.ring, self.nvars)
        xl = CurvePolynomial.var(self.ring, self.nvars, l)
        quot = {}
        carry = zero
        for p in range(top, 0, -1):
            coeff = CurvePolynomial(self.ring, self.nvars, by_power.get(p, {})) + carry
            quot[p - 1] = coeff
            carry = coeff * xl
        rem = CurvePolynomial(self.ring, self.nvars, by_power.get(0, {})) + carry
        if not rem.is_zero():
            raise NonzeroRemainder(f"polynomial is not divisible by x{k + 1} - x{l + 1}")
        out = zero
        for p, c in quot.items():
            out = out + c * CurvePolynomial.var(self.ring, self.nvars, k, p)
        return out

    def degrees(self, var_weights: Sequence[int]) -> set:
        """Joint weighted degrees occurring in the polynomial."""
        out = set()
        for e, v in self.terms.items():
            base = sum(w * p for w, p in zip(var_weights, e))
            out.update(base + w for w in v.weights())
        return out

    def check_homogeneous(self, var_weights: Sequence[int], degree: int, name: str = "polynomial") -> None:
        ds = self.degrees(var_weights)
        if ds and ds != {degree}:
            raise HomogeneityViolation(f"{name}: joint degrees {sorted(ds)}, expected {degree}")


def det(matrix: Sequence[Sequence[CurvePolynomial]], ring: LambdaRing, nvars: int, max_weight=None) -> CurvePolynomial:
    """Determinant by cofactor expansion along the first row."""
    n = len(matrix)
    if n == 0:
        return CurvePolynomial.const(ring, nvars, 1)
    if n == 1:
        return matrix[0][0]
    out = CurvePolynomial(ring, nvars)
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j].mul(det(minor, ring, nvars, max_weight), max_weight)
        out = out + term if j % 2 == 0 else out - term
    return out


class CurveModel:
    """Defining equations with lambda symbols from ``ring`` (a sub-catalog of ``td``).

    Symbols absent from ``ring`` are treated as zero.  ``max_weight`` (if set)
    discards lambda-monomials above that weight in every derived product;
    all downstream quantities are homogeneous, so this only removes terms
    that cannot contribute below the cap.
    """

    def __init__(self, td: TelescopicData, ring: LambdaRing, max_weight: Optional[int] = None):
        self.td = td
        self.ring = ring
        self.m = td.m
        self.max_weight = max_weight
        names = set(ring.names)
        m = td.m
        self.F = []
        for i in range(2, m + 1):
            terms: dict = {}
            e = [0] * m
            e[i - 1] = td.ratio(i)
            terms[tuple(e)] = ring.one
            row = tuple(td.ell[i - 2])
            terms[row] = terms.get(row, ring.zero) - ring.one
            for li in td.lambda_catalog:
                if li.eq_index == i and li.name in names:
                    k = tuple(li.exponents)
                    terms[k] = terms.get(k, ring.zero) - ring.gen(li.name)
            f = CurvePolynomial(ring, m, terms)
            f.check_homogeneous(td.a, td.eq_degree(i), f"F_{i}")
            self.F.append(f)
        self.partials = [[f.derivative(j) for j in range(m)] for f in self.F]
        self.detG = []
        for k in range(m):
            G_k = [[row[j] for j in range(m) if j != k] for row in self.partials]
            self.detG.append(det(G_k, ring, m))
        self._nf_cache: dict = {}

    # -- basic data -----------------------------------------------------------

    @property
    def a(self):
        return self.td.a

    def x(self, k: int, nvars: Optional[int] = None) -> CurvePolynomial:
        return CurvePolynomial.var(self.ring, nvars or self.m, k)

    def monomial(self, e: Sequence[int], nvars: Optional[int] = None, offset: int = 0) -> CurvePolynomial:
        n = nvars or self.m
        f = [0] * n
        for k, p in enumerate(e):
            f[offset + k] = p
        return CurvePolynomial(self.ring, n, {tuple(f): self.ring.one})

    def detG_degree(self, k: int) -> int:
        """Joint degree of ``det G_k`` (``k`` 1-based)."""
        td = self.td
        return sum(td.eq_degree(j) for j in range(2, td.m + 1)) - sum(td.a) + td.a[k - 1]

    def det_Gk_leading_check(self, k: int):
        """Check ``det G_k = (-1)^{k+1} a_k x^gamma + lower`` after reduction to the box.

        Returns the leading exponent ``gamma``; raises ``LeadingMismatch``.
        """
        td = self.td
        deg = self.detG_degree(k)
        dg = self.detG[k - 1]
        dg.check_homogeneous(td.a, deg, f"det G_{k}")
        nf = self.normal_form(dg)
        gamma = td.canonical_rep(deg)
        if gamma is None:
            raise LeadingMismatch(f"degree {deg} of det G_{k} is a gap")
        lead = nf.get(gamma, self.ring.zero)
        want = (-1) ** (k + 1) * td.a[k - 1]
        if lead != want:
            raise LeadingMismatch(f"det G_{k}: coefficient of x^{gamma} is {lead}, expected {want}")
        for e in nf:
            if td.order(e) > deg:
                raise LeadingMismatch(f"det G_{k}: term x^{e} above the leading order")
        return gamma

    # -- two-point objects ----------------------------------------------------

    def h_matrix(self) -> list:
        """``h_{i,j}`` for ``2 <= i, j <= m`` in variables ``(x_1..x_m, y_1..y_m)``."""
        m = self.m
        n2 = 2 * m
        H = []
        for f in self.F:
            row = []
            for j in range(2, m + 1):
                # F(y_1..y_{j-1}, x_j..x_m) - F(y_1..y_j, x_{j+1}..x_m)
                left = [m + k if k < j - 1 else k for k in range(m)]
                right = [m + k if k < j else k for k in range(m)]
                num = f.remap(left, n2) - f.remap(right, n2)
                row.append(num.divide_linear(j - 1, m + j - 1))
            H.append(row)
        return H

    # -- reduction to the basis ----------------------------------------------

    def reduce_monomial(self, e: tuple, cap: Optional[int] = None) -> dict:
        """Normal form of ``x^e``: ``{box exponent: LambdaPolynomial terms dict}``."""
        key = (e, cap)
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        td = self.td
        off = None
        for i in range(td.m, 1, -1):
            if e[i - 1] >= td.ratio(i):
                off = i
                break
        if off is None:
            out = {e: {0: 1}}
        else:
            base = list(e)
            base[off - 1] -= td.ratio(off)
            out: dict = {}
            ckey = self.ring.cap_key(cap)
            for f_e, f_c in self.F[off - 2].terms.items():
                if f_e[off - 1] == td.ratio(off) and all(
                    f_e[k] == 0 for k in range(td.m) if k != off - 1
                ):
                    continue  # the leading x_i^{n_i}
                shifted = tuple(b + p for b, p in zip(base, f_e))
                sub = self.reduce_monomial(shifted, cap)
                neg = {k: -c for k, c in f_c.terms.items()}
                for be, bc in sub.items():
                    addmul(out.setdefault(be, {}), neg, bc, ckey)
            out = {k: v for k, v in out.items() if clean(v)}
        self._nf_cache[key] = out
        return out

    def normal_form(self, p: CurvePolynomial, cap: Optional[int] = None) -> dict:
        """Rewrite ``p`` onto box monomials: ``{exponent: LambdaPolynomial}``."""
        cap = self.max_weight if cap is None else cap
        ckey = self.ring.cap_key(cap)
        raw: dict = {}
        for e, v in p.terms.items():
            for be, bc in self.reduce_monomial(tuple(e), cap).items():
                addmul(raw.setdefault(be, {}), v.terms, bc, ckey)
        return {k: LambdaPolynomial(self.ring, v) for k, v in raw.items() if clean(v)}

    def normal_form2(self, p: CurvePolynomial, cap: Optional[int] = None) -> dict:
        """Reduce a polynomial in ``(x, y)``: ``{(e, f): LambdaPolynomial}``."""
        cap = self.max_weight if cap is None else cap
        ckey = self.ring.cap_key(cap)
        m = self.m
        raw: dict = {}
        for ef, v in p.terms.items():
            rx = self.reduce_monomial(tuple(ef[:m]), cap)
            ry = self.reduce_monomial(tuple(ef[m:]), cap)
            for ex, cx in rx.items():
                tmp: dict = {}
                addmul(tmp, v.terms, cx, ckey)
                if not clean(tmp):
                    continue
                for ey, cy in ry.items():
                    addmul(raw.setdefault((ex, ey), {}), tmp, cy, ckey)
        return {k: LambdaPolynomial(self.ring, v) for k, v in raw.items() if clean(v)}

    def from_normal_form(self, nf: dict) -> CurvePolynomial:
        return CurvePolynomial(self.ring, self.m, dict(nf))


def build_curve(td: TelescopicData, active: Optional[Iterable[str]] = None, max_weight: Optional[int] = None) -> CurveModel:
    """Curve with every catalog symbol (or only the named ``active`` ones) symbolic."""
    if active is None:
        symbols = list(td.lambda_catalog)
    else:
        keep = set(active)
        unknown = keep - {li.name for li in td.lambda_catalog}
        if unknown:
            raise KeyError(f"unknown coefficient symbols {sorted(unknown)}")
        symbols = [li for li in td.lambda_catalog if li.name in keep]
    return CurveModel(td, LambdaRing(symbols), max_weight)
