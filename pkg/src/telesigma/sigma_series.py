"""Schur functions, the tau function and the sigma series in ``u_1..u_g``.

``u_i`` has weight ``w_i`` (the ``i``-th gap).  Series are truncated at a
u-weight ``W``; a Hurwitz coefficient is ``coeff(u^n) * prod n_i!``.

The sigma series is assembled as
``sigma(u) = exp(c B^{-1} u - u^T B^{-T} N B^{-1} u / 2) tau(B^{-1} u)``
with ``tau = sum_mu xi_mu S_mu`` built from the expansion of the basis
functions at infinity.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, prod
from typing import Optional, Sequence

from .algebra.poly import LambdaPolynomial, LambdaRing, addmul, addscaled, clean
from .errors import (
    GaugeDependence,
    HomogeneityViolation,
    IntegralityViolation,
    LeadingTermMismatch,
    StabilizationFailure,
)
from .semigroup import TelescopicData


class USeries:
    """Truncated series ``sum coeff_n u^n`` keeping ``sum w_i n_i <= W``."""

    __slots__ = ("ring", "w", "W", "terms")

    def __init__(self, ring: LambdaRing, w: Sequence[int], W: int, terms: Optional[dict] = None):
        self.ring = ring
        self.w = tuple(w)
        self.W = W
        self.terms = {}
        for n, v in (terms or {}).items():
            if v.terms and self.weight(n) <= W:
                self.terms[n] = v

    @classmethod
    def from_raw(cls, ring, w, W, raw: dict) -> "USeries":
        return cls(ring, w, W, {n: LambdaPolynomial(ring, clean(v)) for n, v in raw.items()})

    @classmethod
    def one(cls, ring, w, W) -> "USeries":
        return cls(ring, w, W, {(0,) * len(w): ring.one})

    @classmethod
    def monomial(cls, ring, w, W, n, coeff=1) -> "USeries":
        if not isinstance(coeff, LambdaPolynomial):
            coeff = ring.const(coeff)
        return cls(ring, w, W, {tuple(n): coeff})

    @property
    def g(self) -> int:
        return len(self.w)

    def weight(self, n) -> int:
        return sum(a * b for a, b in zip(self.w, n))

    def coeff(self, n) -> LambdaPolynomial:
        return self.terms.get(tuple(n), self.ring.zero)

    def zeta(self, n) -> LambdaPolynomial:
        """Hurwitz-normalized coefficient ``coeff(u^n) * prod n_i!``."""
        return self.coeff(n).scale(prod(factorial(k) for k in n))

    def hurwitz_items(self):
        for n in sorted(self.terms, key=lambda n: (self.weight(n), n)):
            yield n, self.zeta(n)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, W: int) -> "USeries":
        return USeries(self.ring, self.w, min(W, self.W), self.terms)

    def part(self, weight: int) -> "USeries":
        return USeries(self.ring, self.w, self.W, {n: v for n, v in self.terms.items() if self.weight(n) == weight})

    def min_weight(self) -> Optional[int]:
        return min((self.weight(n) for n in self.terms), default=None)

    def __eq__(self, other):
        if not isinstance(other, USeries):
            return NotImplemented
        return self.w == other.w and {n: v.terms for n, v in self.terms.items()} == {
            n: v.terms for n, v in other.terms.items()
        }

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for n in sorted(self.terms, key=lambda n: (self.weight(n), n)):
            mono = "*".join(f"u{i + 1}^{k}" if k > 1 else f"u{i + 1}" for i, k in enumerate(n) if k)
            parts.append(f"({self.terms[n]})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- arithmetic -----------------------------------------------------------

    def _combine(self, other: "USeries", sign) -> "USeries":
        W = min(self.W, other.W)
        raw = {n: dict(v.terms) for n, v in self.terms.items()}
        for n, v in other.terms.items():
            addscaled(raw.setdefault(n, {}), v.terms, sign)
        return USeries.from_raw(self.ring, self.w, W, raw)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "USeries":
        if isinstance(s, LambdaPolynomial):
            return USeries(self.ring, self.w, self.W, {n: v * s for n, v in self.terms.items()})
        return USeries(self.ring, self.w, self.W, {n: v.scale(s) for n, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, USeries):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def mul(self, other: "USeries", W: Optional[int] = None) -> "USeries":
        W = min(self.W, other.W) if W is None else W
        raw: dict = {}
        b_items = [(n, self.weight(n), v.terms) for n, v in other.terms.items()]
        for n1, v1 in self.terms.items():
            w1 = self.weight(n1)
            if w1 > W:
                continue
            for n2, w2, t2 in b_items:
                if w1 + w2 <= W:
                    n = tuple(x + y for x, y in zip(n1, n2))
                    addmul(raw.setdefault(n, {}), v1.terms, t2)
        return USeries.from_raw(self.ring, self.w, W, raw)

    def pow(self, k: int) -> "USeries":
        out = USeries.one(self.ring, self.w, self.W)
        for _ in range(k):
            out = out.mul(self)
        return out

    def exp(self) -> "USeries":
        """``exp`` of a series without constant term, as a product of monomial exponentials."""
        zero = (0,) * self.g
        if zero in self.terms:
            raise ValueError("exp needs a series without constant term")
        out = USeries.one(self.ring, self.w, self.W)
        for n in sorted(self.terms):
            out = out.mul(exp_monomial(self.ring, self.w, self.W, n, self.terms[n]))
        return out

    def substitute_linear(self, M: Sequence[Sequence[LambdaPolynomial]]) -> "USeries":
        """``f(M u)``: ``u_i -> sum_j M[i][j] u_j``, truncated at the same weight."""
        g = self.g
        lin = []
        for i in range(g):
            terms = {}
            for j in range(g):
                if M[i][j]:
                    e = [0] * g
                    e[j] = 1
                    terms[tuple(e)] = M[i][j]
            lin.append(USeries(self.ring, self.w, self.W, terms))
        powers = [[USeries.one(self.ring, self.w, self.W)] for _ in range(g)]
        out_raw: dict = {}
        for n, v in self.terms.items():
            term = USeries(self.ring, self.w, self.W, {(0,) * g: v})
            for i, k in enumerate(n):
                while len(powers[i]) <= k:
                    powers[i].append(powers[i][-1].mul(lin[i]))
                if k:
                    term = term.mul(powers[i][k])
            for m_, c in term.terms.items():
                addscaled(out_raw.setdefault(m_, {}), c.terms, 1)
        return USeries.from_raw(self.ring, self.w, self.W, out_raw)

    # -- grading / export -----------------------------------------------------

    def check_homogeneous(self, shift: int, name: str = "series") -> None:
        """Coefficient of ``u^n`` must have lambda-weight ``weight(n) - shift``."""
        for n, v in self.terms.items():
            want = self.weight(n) - shift
            if not v.is_homogeneous(want):
                raise HomogeneityViolation(f"{name}: coefficient of u^{n} has weights {sorted(v.weights())}, expected {want}")

    def to_json_terms(self) -> list:
        return [{"n": list(n), "zeta": z.to_json()} for n, z in self.hurwitz_items()]


def exp_monomial(ring, w, W, n, coeff: LambdaPolynomial) -> USeries:
    """``exp(coeff * u^n)`` truncated at weight ``W``."""
    wt = sum(a * b for a, b in zip(w, n))
    terms = {(0,) * len(w): ring.one}
    power = ring.one
    k = 1
    while wt and k * wt <= W:
        power = power * coeff
        terms[tuple(k * x for x in n)] = power.scale(Fraction(1, factorial(k)))
        k += 1
    return USeries(ring, w, W, terms)


# -- partitions and Schur functions -------------------------------------------


def partitions(n: int, max_part: Optional[int] = None):
    """Partitions of ``n`` as weakly decreasing tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def p_restricted(ring, gaps: Sequence[int], n: int, W: Optional[int] = None) -> USeries:
    """``p_n`` with ``T_{w_i} = u_i`` and all other ``T_j = 0``."""
    W = n if W is None else W
    g = len(gaps)
    terms = {}
    if n == 0:
        return USeries.one(ring, gaps, W)
    if n < 0:
        return USeries(ring, gaps, W)

    def rec(i, rest, acc):
        if i == g:
            if rest == 0:
                terms[tuple(acc)] = ring.const(Fraction(1, prod(factorial(k) for k in acc)))
            return
        for k in range(rest // gaps[i] + 1):
            rec(i + 1, rest - k * gaps[i], acc + [k])

    rec(0, n, [])
    return USeries(ring, gaps, W, terms)


def _det_dp(n: int, entry) -> object:
    """Determinant by row-wise expansion over used-column bitmasks.

    ``entry(r, c)`` returns a value supporting ``*``, ``+``, ``scale`` or
    ``None`` for a structural zero.  Only reachable masks are stored.
    """
    states = {0: None}
    first = True
    for r in range(n):
        new: dict = {}
        for mask, val in states.items():
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                e = entry(r, c)
                if e is None:
                    continue
                # sign: number of used columns to the right of c
                sign = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                term = e if first else val * e
                if sign < 0:
                    term = -term
                nm = mask | bit
                new[nm] = term if nm not in new else new[nm] + term
        states = new
        first = False
        if not states:
            return None
    return states.get((1 << n) - 1)


def _subset_sign(sub: Sequence[int], n: int) -> int:
    """Sign of the permutation moving the sorted positions ``sub`` to the front."""
    moves = sum(p - k for k, p in enumerate(sub))
    return -1 if moves % 2 else 1


def schur(ring, gaps: Sequence[int], mu: Sequence[int], W: Optional[int] = None) -> USeries:
    """Jacobi-Trudi ``det(p_{mu_i - i + j})`` in the restricted variables."""
    size = sum(mu)
    W = size if W is None else W
    mu = tuple(x for x in mu if x)
    if not mu:
        return USeries.one(ring, gaps, W)
    cache = {}

    def p(k):
        if k not in cache:
            cache[k] = p_restricted(ring, gaps, k, size)
        return cache[k]

    L = len(mu)

    def entry(r, c):
        k = mu[r] - r + c
        if k < 0:
            return None
        s = p(k)
        return None if s.is_zero() else s

    out = _det_dp(L, entry)
    if out is None:
        return USeries(ring, gaps, W)
    out = USeries(ring, gaps, W, out.terms)
    for n, z in out.hurwitz_items():
        if not z.is_integral():
            raise IntegralityViolation(f"S_{mu}: Hurwitz coefficient of u^{n} is {z}")
    return out


# -- tau ------------------------------------------------------------------------


class XiTable:
    """``xi_{i,j}``: coefficients of ``t^{g-1} phi_j`` (``j`` 1-based)."""

    def __init__(self, es, rel: int):
        self.es = es
        self.td = es.td
        self.ring = es.ring
        self.rel = rel
        self._cols: dict = {}
        self._orders = None

    def order(self, j: int) -> int:
        return self.td.order(self.td.phi_basis(j)[j - 1])

    def column(self, j: int):
        col = self._cols.get(j)
        if col is None:
            g = self.td.genus
            s = self.es.phi_series(j, self.rel).shift(g - 1)
            for k, v in s.items():
                if not v.is_integral():
                    raise IntegralityViolation(f"xi_{{{k},{j}}} = {v} is not in Z[lambda]")
            if j > g:
                v, lead = s.leading()
                if v != -j or lead != 1:
                    raise LeadingTermMismatch(f"xi column {j} starts at t^{v} with ({lead}), expected t^{-j}")
            col = s
            self._cols[j] = col
        return col

    def __call__(self, i: int, j: int) -> LambdaPolynomial:
        return self.column(j).coeff(i)

    def det(self, mu: Sequence[int], N: int) -> LambdaPolynomial:
        """``det(xi_{mu_r - r, c})_{r, c <= N}``.

        A row with ``m = mu_r - r <= -(g+1)`` starts with a 1 in column ``-m``
        and is zero to its left, so those columns are cleared from the other
        rows by multiply-and-subtract; what remains is the small complement
        on rows with ``m >= -g``.
        """
        g = self.td.genus
        rows = [(mu[r] if r < len(mu) else 0) - (r + 1) for r in range(N)]
        orders = [self.order(j) for j in range(1, N + 1)]

        def entry(i, c):
            wt = i + orders[c] - g + 1
            if wt < 0 or wt > self.rel:
                return None
            v = self(i, c + 1)
            return v.terms if v.terms else None

        def row(i):
            # fresh dicts: reduction below must not touch the cached columns
            out = {}
            for c in range(N):
                e = entry(i, c)
                if e is not None:
                    out[c] = dict(e)
            return out

        pivots = {}
        free_rows = []
        for r, i in enumerate(rows):
            c = -i - 1
            if i <= -(g + 1) and c < N:
                pivots[c] = r
            else:
                free_rows.append(r)
        free_cols = [c for c in range(N) if c not in pivots]
        if len(free_cols) != len(free_rows):
            return self.ring.zero
        pivot_rows = {c: row(rows[r]) for c, r in pivots.items()}
        for c, pr in pivot_rows.items():
            if pr.get(c) != {0: 1} or any(k < c for k in pr):
                raise LeadingTermMismatch(f"xi row {rows[pivots[c]]} has no unit pivot in column {c + 1}")
        reduced = []
        for r in free_rows:
            X = row(rows[r])
            for c in sorted(pivots):
                coef = X.pop(c, None)
                if not coef:
                    continue
                for k, v in pivot_rows[c].items():
                    if k != c:
                        acc = X.setdefault(k, {})
                        neg = {}
                        addmul(neg, coef, v)
                        addscaled(acc, neg, -1)
            reduced.append({k: clean(v) for k, v in X.items()})
        sign = _subset_sign(free_rows, N) * _subset_sign(free_cols, N)
        k = len(free_rows)
        if k == 0:
            return self.ring.const(sign)
        ring = self.ring

        def small(r, c):
            v = reduced[r].get(free_cols[c])
            return LambdaPolynomial(ring, v) if v else None

        out = _det_dp(k, small)
        if out is None:
            return ring.zero
        return out if sign > 0 else -out

    def xi_mu(self, mu: Sequence[int], check: bool = True) -> LambdaPolynomial:
        N = max(len(mu), self.td.genus)
        val = self.det(mu, N)
        if check:
            for extra in (1, 2):
                other = self.det(mu, N + extra)
                if other != val:
                    raise StabilizationFailure(f"xi_{tuple(mu)}: size {N} gives {val}, size {N + extra} gives {other}")
        return val


def tau(es, W: int, check: bool = True) -> USeries:
    """``sum_{|mu| <= W} xi_mu S_mu(u)`` truncated at weight ``W``."""
    td = es.td
    ring = es.ring
    gaps = td.gaps
    base = sum(td.mu)
    xi = XiTable(es, max(W - base, 0))
    raw: dict = {}
    for size in range(base, W + 1):
        for mu in partitions(size):
            S = schur(ring, gaps, mu, W)
            if S.is_zero():
                continue
            x = xi.xi_mu(mu, check)
            if not x:
                continue
            for n, v in S.terms.items():
                addmul(raw.setdefault(n, {}), v.terms, x.terms)
    out = USeries.from_raw(ring, gaps, W, raw)
    for n, z in out.hurwitz_items():
        if not z.is_integral():
            raise IntegralityViolation(f"tau: Hurwitz coefficient of u^{n} is {z}")
    out.check_homogeneous(base, "tau")
    return out


# -- B, c, N and sigma -------------------------------------------------------


def unit_upper_inverse(B: Sequence[Sequence[LambdaPolynomial]], ring) -> list:
    """Inverse of a unit upper-triangular matrix by back substitution."""
    g = len(B)
    inv = [[ring.zero] * g for _ in range(g)]
    for i in range(g - 1, -1, -1):
        inv[i][i] = ring.one
        for j in range(i + 1, g):
            acc = ring.zero
            for k in range(i + 1, j + 1):
                if B[i][k] and inv[k][j]:
                    acc = acc + B[i][k] * inv[k][j]
            inv[i][j] = -acc
    return inv


def assemble_BcN(es, qtable, W: Optional[int] = None):
    """``B``, ``c``, ``N`` from the differentials and the ``q`` table.

    Entries ``N_{i,j}`` with ``w_i + w_j > W`` only feed u-monomials above the
    truncation (``B^{-1}`` raises weight), so they are left at zero.
    """
    td = es.td
    g = td.genus
    gaps = td.gaps
    ring = es.ring
    B = [[ring.zero] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            if j >= i:
                B[i][j] = es.b_tilde(i + 1, gaps[j])
            else:
                v = es.b_tilde(i + 1, gaps[j])
                if v:
                    raise LeadingTermMismatch(f"B is not upper triangular at ({i + 1},{j + 1})")
        if B[i][i] != 1:
            raise LeadingTermMismatch(f"B has diagonal entry {B[i][i]} at {i + 1}")
    c = [es.c_coeff(w) for w in gaps]
    N = [[qtable(wi, wj) if W is None or wi + wj <= W else ring.zero for wj in gaps] for wi in gaps]
    for i in range(g):
        for j in range(g):
            if N[i][j] != N[j][i]:
                raise LeadingTermMismatch("N is not symmetric")
    return B, c, N


def _matmul(A, B, ring):
    n, m, k = len(A), len(B[0]), len(B)
    return [[sum((A[i][l] * B[l][j] for l in range(k) if A[i][l] and B[l][j]), ring.zero) for j in range(m)] for i in range(n)]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def exp_prefactor(ring, gaps, W, cbar, Nbar, sign: int = 1) -> USeries:
    """``exp(sign * (cbar.u - u^T Nbar u / 2))``."""
    g = len(gaps)
    terms: dict = {}
    for i in range(g):
        e = [0] * g
        e[i] = 1
        if cbar[i]:
            terms[tuple(e)] = cbar[i].scale(sign)
    for i in range(g):
        for j in range(i, g):
            e = [0] * g
            e[i] += 1
            e[j] += 1
            v = Nbar[i][j] if i == j else Nbar[i][j] + Nbar[j][i]
            if v:
                terms[tuple(e)] = terms.get(tuple(e), ring.zero) + v.scale(Fraction(-sign, 2))
    return USeries(ring, gaps, W, terms).exp()


def check_diagonal_factor(ring, gaps, W, Nbar) -> None:
    """``exp(-Nbar_ii u_i^2 / 2)`` has Hurwitz coefficients in ``Z[lambda]``."""
    g = len(gaps)
    for i in range(g):
        e = [0] * g
        e[i] = 2
        f = exp_monomial(ring, gaps, W, tuple(e), Nbar[i][i].scale(Fraction(-1, 2)))
        for n, z in f.hurwitz_items():
            if not z.is_integral():
                raise IntegralityViolation(f"exp(-q u_{i + 1}^2/2): Hurwitz coefficient {z} at u^{n}")


class SigmaExpansion:
    def __init__(self, series: USeries, td: TelescopicData, b, W: int, parts: Optional[dict] = None):
        self.series = series
        self.td = td
        self.b = tuple(b)
        self.W = W
        self.parts = parts or {}

    @property
    def ring(self):
        return self.series.ring

    def to_dict(self, with_b: bool = True) -> dict:
        out = {"curve": list(self.td.a)}
        if with_b:
            out["b"] = list(self.b)
        out["W"] = self.W
        out["terms"] = self.series.to_json_terms()
        return out


def sigma(es, qtable, W: int, check: bool = True) -> SigmaExpansion:
    td = es.td
    ring = es.ring
    gaps = td.gaps
    base = sum(td.mu)
    B, c, N = assemble_BcN(es, qtable, W)
    Binv = unit_upper_inverse(B, ring)
    cbar = [sum((c[k] * Binv[k][i] for k in range(len(c)) if c[k] and Binv[k][i]), ring.zero) for i in range(len(c))]
    Nbar = _matmul(_matmul(_transpose(Binv), N, ring), Binv, ring)
    t = tau(es, W, check)
    t_sub = t.substitute_linear(Binv)
    pre = exp_prefactor(ring, gaps, W, cbar, Nbar)
    s = pre.mul(t_sub)
    s.check_homogeneous(base, "sigma")
    lead = s.part(base)
    want = schur(ring, gaps, td.mu, W)
    if lead != want or s.min_weight() != base:
        raise LeadingTermMismatch(f"lowest part of sigma is {lead}, expected S_mu = {want}")
    if check:
        check_diagonal_factor(ring, gaps, W, Nbar)
    parts = {"B": B, "Binv": Binv, "c": c, "N": N, "cbar": cbar, "Nbar": Nbar, "tau": t}
    return SigmaExpansion(s, td, es.b, W, parts)


def tau_from_sigma(se: SigmaExpansion) -> USeries:
    """``exp(-c v + v^T N v / 2) sigma(B v)``; equals ``tau(v)`` to the same weight."""
    ring = se.ring
    gaps = se.td.gaps
    B, c, N = se.parts["B"], se.parts["c"], se.parts["N"]
    pre = exp_prefactor(ring, gaps, se.W, c, N, sign=-1)
    return pre.mul(se.series.substitute_linear(B))


def sigma_squared(se: SigmaExpansion) -> USeries:
    """``sigma^2``; cross terms above the truncation weight are dropped."""
    return se.series.mul(se.series)


def compare_gauges(se1: SigmaExpansion, se2: SigmaExpansion) -> None:
    if se1.series != se2.series:
        diff = se1.series - se2.series
        n = next(iter(sorted(diff.terms)))
        raise GaugeDependence(f"sigma differs between b={se1.b} and b={se2.b} at u^{n}")
