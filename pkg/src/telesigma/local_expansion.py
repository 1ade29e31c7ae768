"""Expansions at infinity in the local parameter ``t = prod x_i^{b_i}``.

With ``sum a_i b_i = -1`` every coordinate expands as
``x_i = t^{-a_i} (1 + p_{i,1} t + p_{i,2} t^2 + ...)``.  Substituting into the
equations and into ``prod x_i^{b_i} = t`` gives, order by order, the linear
system ``D p_l = f_l`` whose matrix has determinant ``+-1``; the right side
only involves lower orders.  Everything here is graded: ``p_{i,k}`` has
lambda-weight ``k``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .algebra.poly import LambdaPolynomial, addmul, addscaled, clean
from .algebra.tseries import TSeries
from .curve_model import CurvePolynomial, CurveModel
from .errors import (
    DeterminantMismatch,
    HomogeneityViolation,
    IntegralityViolation,
    LeadingCoefficientNotOne,
    ResidualNotInZLambda,
    TruncationExceeded,
)
from .semigroup import TelescopicData


def _bezout_min(x: int, y: int):
    """``(s, r, g)`` with ``s x + r y = g = gcd(x, y)`` minimizing ``|s| + |r|``."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    g = old_r
    if g < 0:
        g, old_s, old_t = -g, -old_s, -old_t
    sx, sy = y // g, x // g
    best = None
    # the optimum lies within a couple of steps of the Euclid solution
    for k in range(-3, 4):
        cand = (old_s + k * sx, old_t - k * sy)
        key = (abs(cand[0]) + abs(cand[1]), abs(cand[0]), cand[0])
        if best is None or key < best[0]:
            best = (key, cand)
    s0, t0 = best[1]
    return s0, t0, g


def choose_b(td: TelescopicData) -> tuple:
    """Canonical ``b`` with ``sum a_i b_i = -1`` by folding extended Euclid left to right."""
    a = td.a
    coeffs = [1]
    g = a[0]
    for x in a[1:]:
        s, r, g = _bezout_min(g, x)
        coeffs = [s * c for c in coeffs] + [r]
    assert g == 1
    b = tuple(-c for c in coeffs)
    assert sum(ai * bi for ai, bi in zip(a, b)) == -1
    return b


def int_det(M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * int_det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n) if M[0][j])


def int_inverse(M: Sequence[Sequence[int]]) -> list:
    """Inverse of a unimodular integer matrix (Gauss-Jordan over Q, then checked)."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    inv = [row[n:] for row in A]
    if any(x.denominator != 1 for row in inv for x in row):
        raise DeterminantMismatch("inverse of D is not integral")
    return [[int(x) for x in row] for row in inv]


def build_D(td: TelescopicData, b: Sequence[int]) -> list:
    """Rows ``n_i e_i - l_i`` for ``i = 2..m``, then ``b``; ``det D = (-1)^m``."""
    m = td.m
    b = tuple(int(x) for x in b)
    if len(b) != m or sum(x * y for x, y in zip(td.a, b)) != -1:
        raise DeterminantMismatch(f"b = {b} does not satisfy sum a_i b_i = -1")
    D = []
    for i in range(2, m + 1):
        row = [-x for x in td.ell[i - 2]]
        row[i - 1] += td.ratio(i)
        D.append(row)
    D.append(list(b))
    dv = int_det(D)
    if dv != (-1) ** m:
        raise DeterminantMismatch(f"det D = {dv}, expected {(-1) ** m}")
    return D


class _Node:
    """Coefficients of ``prod_i P_i^{e_i}``, built as parent * P_factor."""

    __slots__ = ("e", "parent", "factor", "c")

    def __init__(self, e, parent, factor):
        self.e = e
        self.parent = parent
        self.factor = factor
        self.c = [{0: 1}]


class ExpansionSet:
    """Lazily extended expansions of a curve model at infinity.

    ``order`` is the largest ``k`` for which all ``p_{i,k}`` are known;
    ``t_order`` is the hard ceiling (exceeding it raises ``TruncationExceeded``).
    """

    def __init__(self, cm: CurveModel, b: Optional[Sequence[int]] = None, t_order: Optional[int] = None):
        self.cm = cm
        self.td = cm.td
        self.ring = cm.ring
        self.b = tuple(b) if b is not None else choose_b(cm.td)
        self.D = build_D(cm.td, self.b)
        self.Dinv = int_inverse(self.D)
        self.t_order = t_order
        m = self.td.m
        self.p = [[{0: 1}] for _ in range(m)]  # raw term dicts
        self.order = 0
        self._nodes: dict = {}
        self._rows = []
        for idx, f in enumerate(cm.F):
            i = idx + 2
            lead = [0] * m
            lead[i - 1] = self.td.ratio(i)
            lead = tuple(lead)
            ell = tuple(self.td.ell[i - 2])
            lam_terms = []
            for e, v in f.terms.items():
                if e == lead or e == ell:
                    continue
                node = self._node(e)
                for key, c in v.terms.items():
                    lam_terms.append((self.ring.weight(key), key, -c, node))
            self._rows.append((self._node(lead), self._node(ell), lam_terms))
        self._L = self._node(tuple(-x if x < 0 else 0 for x in self.b))
        self._R = self._node(tuple(x if x > 0 else 0 for x in self.b))
        self._series_cache: dict = {}

    # -- node graph -----------------------------------------------------------

    def _node(self, e: tuple) -> _Node:
        e = tuple(e)
        hit = self._nodes.get(e)
        if hit is not None:
            return hit
        if not any(e):
            node = _Node(e, None, None)
        else:
            k = max(i for i, x in enumerate(e) if x)
            parent = self._node(tuple(x - (i == k) for i, x in enumerate(e)))
            node = _Node(e, parent, k)
            # bring the new node up to the current order
            for l in range(1, self.order + 1):
                node.c.append(self._node_coeff(node, l, provisional=False))
        self._nodes[e] = node
        return node

    def _node_coeff(self, node: _Node, l: int, provisional: bool) -> dict:
        """``[t^l]`` of the node product; with ``provisional`` the ``p_{*,l}`` are taken as 0."""
        par, pk = node.parent.c, self.p[node.factor]
        acc: dict = {}
        addscaled(acc, par[l], 1)
        if not provisional:
            addscaled(acc, pk[l], 1)
        for s in range(1, l):
            if par[s] and pk[l - s]:
                addmul(acc, par[s], pk[l - s])
        return clean(acc)

    def _advance(self) -> None:
        l = self.order + 1
        if self.t_order is not None and l > self.t_order:
            raise TruncationExceeded(
                f"expansion order {l} needed but the truncation order is {self.t_order}; raise --t-order"
            )
        nodes = sorted(self._nodes.values(), key=lambda n: sum(n.e))
        prov = {}
        for n in nodes:
            if n.parent is None:
                prov[n.e] = {}
            else:
                # provisional value uses the parent's provisional order-l coefficient
                par_l = prov[n.parent.e]
                acc = dict(par_l)
                pk = self.p[n.factor]
                for s in range(1, l):
                    if n.parent.c[s] and pk[l - s]:
                        addmul(acc, n.parent.c[s], pk[l - s])
                prov[n.e] = clean(acc)
        rhs = []
        for lead, ell, lam_terms in self._rows:
            acc = dict(prov[ell.e])
            addscaled(acc, prov[lead.e], -1)
            for w, key, c, node in lam_terms:
                if w <= l:
                    src = node.c[l - w]
                    if src:
                        addmul(acc, {key: c}, src)
            rhs.append(clean(acc))
        acc = dict(prov[self._L.e])
        addscaled(acc, prov[self._R.e], -1)
        rhs.append(clean(acc))
        m = self.td.m
        for i in range(m):
            acc = {}
            for j in range(m):
                if self.Dinv[i][j] and rhs[j]:
                    addscaled(acc, rhs[j], self.Dinv[i][j])
            clean(acc)
            poly = LambdaPolynomial(self.ring, acc)
            if not poly.is_integral():
                raise ResidualNotInZLambda(f"p_{{{i + 1},{l}}} = {poly} is not in Z[lambda]")
            if not poly.is_homogeneous(l):
                raise HomogeneityViolation(f"p_{{{i + 1},{l}}} has weights {sorted(poly.weights())}, expected {l}")
            self.p[i].append(acc)
        for n in nodes:
            if n.parent is None:
                n.c.append({})
                continue
            acc = dict(prov[n.e])
            for i, ei in enumerate(n.e):
                if ei and self.p[i][l]:
                    addscaled(acc, self.p[i][l], ei)
            n.c.append(clean(acc))
        self.order = l

    def ensure(self, order: int) -> None:
        while self.order < order:
            self._advance()

    # -- series views ---------------------------------------------------------

    def p_coeff(self, i: int, k: int) -> LambdaPolynomial:
        """``p_{i,k}`` with 1-based ``i``."""
        self.ensure(k)
        return LambdaPolynomial(self.ring, self.p[i - 1][k])

    def P(self, i: int, rel: int) -> TSeries:
        """``t^{a_i} x_i`` through ``t^rel`` (1-based ``i``)."""
        self.ensure(rel)
        return TSeries(self.ring, 0, [LambdaPolynomial(self.ring, c) for c in self.p[i - 1][: rel + 1]], rel)

    def x_series(self, i: int, rel: int) -> TSeries:
        return self.P(i, rel).shift(-self.td.a[i - 1])

    def monomial_series(self, e: Sequence[int], rel: int) -> TSeries:
        """``t^{order(e)} x^e`` through ``t^rel``."""
        self.ensure(rel)
        node = self._node(tuple(e))
        return TSeries(self.ring, 0, [LambdaPolynomial(self.ring, c) for c in node.c[: rel + 1]], rel)

    def expand(self, poly: CurvePolynomial, rel: int, lead: Optional[int] = None) -> TSeries:
        """Laurent expansion of ``poly`` valid through ``t^{-lead + rel}``.

        ``lead`` defaults to the highest pole order among the monomials of ``poly``.
        """
        if not poly.terms:
            return TSeries.zero(self.ring, None if lead is None else rel - lead)
        orders = {e: self.td.order(e) for e in poly.terms}
        if lead is None:
            lead = max(orders.values())
        top = rel - lead
        raw: dict = {}
        for e, v in poly.terms.items():
            o = orders[e]
            need = top + o
            if need < 0:
                continue
            s = self.monomial_series(e, need)
            for k, c in s.items():
                addmul(raw.setdefault(k - o, {}), v.terms, c.terms)
        if not raw:
            return TSeries.zero(self.ring, top)
        return TSeries.from_dict(self.ring, {k: LambdaPolynomial(self.ring, clean(c)) for k, c in raw.items()}, top)

    def t_check(self, rel: int) -> TSeries:
        """``prod x_i^{b_i}`` through ``t^{1+rel}`` (should equal ``t``)."""
        out = TSeries.one(self.ring)
        for i, bi in enumerate(self.b, start=1):
            if bi:
                out = out.mul(self.P(i, rel).pow(bi))
        return out.shift(1)

    # -- differentials --------------------------------------------------------

    def dx_over_detG(self, k: int, rel: int) -> TSeries:
        """``(dx_k/dt) / det G_k`` through relative order ``rel`` (1-based ``k``)."""
        xk = self.x_series(k, rel)
        dg = self.expand(self.cm.detG[k - 1], rel, lead=self.cm.detG_degree(k))
        return xk.derivative().divide(dg)

    def Omega1(self, rel: int) -> TSeries:
        """``(dx_1/dt)/det G_1 = -t^{2g-2}(1 + ...)``; checked to lie in ``Z[lambda]``."""
        key = ("Omega1", rel)
        hit = self._series_cache.get(key)
        if hit is not None:
            return hit
        s = self.dx_over_detG(1, rel)
        for k, v in s.items():
            if not v.is_integral():
                raise IntegralityViolation(f"dx_1/det G_1: coefficient of t^{k} is {v}")
        self._series_cache[key] = s
        return s

    def gauge_identity(self, rel: int) -> None:
        """Assert ``dx_1/det G_1 = (-1)^{k-1} dx_k/det G_k`` for every ``k``."""
        base = self.Omega1(rel)
        for k in range(2, self.td.m + 1):
            other = self.dx_over_detG(k, rel).scale((-1) ** (k - 1))
            if not base.agrees_with(other):
                raise IntegralityViolation(f"dx_1/det G_1 and dx_{k}/det G_{k} expansions differ")

    def phi_series(self, j: int, rel: int) -> TSeries:
        """Laurent expansion of ``phi_j`` (1-based) through relative order ``rel``."""
        e = self.td.phi_basis(j)[j - 1]
        return self.monomial_series(e, rel).shift(-self.td.order(e))

    def omega(self, i: int, rel: int) -> TSeries:
        """``omega_i/dt = t^{w_i-1}(1 + sum_j b_{i,j} t^j)`` through ``t^{w_i-1+rel}``."""
        key = ("omega", i, rel)
        hit = self._series_cache.get(key)
        if hit is not None:
            return hit
        g = self.td.genus
        s = self.phi_series(g + 1 - i, rel).mul(self.Omega1(rel)).scale(-1)
        w = self.td.gaps[i - 1]
        v, lead = s.leading()
        if v != w - 1 or lead != 1:
            raise LeadingCoefficientNotOne(f"omega_{i} starts with ({lead}) t^{v}, expected t^{w - 1}")
        for k, c in s.items():
            if not c.is_integral():
                raise IntegralityViolation(f"omega_{i}: coefficient of t^{k} is {c}")
        s.check_homogeneous(1 - w, name=f"omega_{i}")
        self._series_cache[key] = s
        return s

    def b_tilde(self, i: int, j: int) -> LambdaPolynomial:
        """Coefficient of ``t^{j-1}`` in ``omega_i/dt``."""
        w = self.td.gaps[i - 1]
        return self.omega(i, max(j - w, 0)).coeff(j - 1)

    def c_series(self, rel: int) -> TSeries:
        """``sum_k c_k t^{k-1} = U'/(2U)`` with ``U = t^{2-2g} omega_g/dt``; valid through ``t^{rel-1}``."""
        g = self.td.genus
        U = self.omega(g, rel).shift(-(2 * g - 2))
        return U.derivative().mul(U.inverse()).scale(Fraction(1, 2))

    def c_coeff(self, k: int) -> LambdaPolynomial:
        return self.c_series(k).coeff(k - 1)
