"""The symmetric bidifferential and its expansion coefficients ``q_{i,j}``.

``omega_hat(P, Q) = F(P, Q) / ((x_1 - y_1)^2 det G_1(P) det G_1(Q)) dx_1 dy_1``
where ``F`` is the reduced numerator of ``d_Q Omega`` (coefficients
``c~``) plus ``(x_1 - y_1)^2 sum c x^i y^j`` with ``c`` fixed by symmetry.
Expanding at infinity in ``t_P, t_Q`` gives
``omega_hat = (1/(t_P - t_Q)^2 + sum q_{i,j} t_P^{i-1} t_Q^{j-1}) dt_P dt_Q``.

All tables are graded; a weight cap drops lambda-monomials that cannot reach
the requested window, which keeps larger curves tractable.
"""

from __future__ import annotations

from typing import Optional

from .algebra.biseries import BiSeries
from .algebra.poly import LambdaPolynomial, addmul, addscaled, clean
from .curve_model import CurveModel, CurvePolynomial, det
from .errors import HomogeneityViolation, IntegralityViolation, NonzeroRemainder, TruncationExceeded, WindowExceeded
from .local_expansion import ExpansionSet


def numerator_degree(td) -> int:
    return 2 * (2 * td.genus - 1 + td.a[0])


def _check_entry(name, key, v: LambdaPolynomial, weight: int) -> None:
    if not v.is_integral():
        raise IntegralityViolation(f"{name}{key} = {v} is not in Z[lambda]")
    if not v.is_homogeneous(weight):
        raise HomogeneityViolation(f"{name}{key} has weights {sorted(v.weights())}, expected {weight}")


def dq_omega_numerator(cm: CurveModel, cap: Optional[int] = None) -> CurvePolynomial:
    """Numerator of ``d_Q Omega`` over ``(x_1-y_1)^2 det G_1(P) det G_1(Q)``, in ``(x, y)``."""
    m = cm.m
    n2 = 2 * m
    H = cm.h_matrix()
    dH = det(H, cm.ring, n2, cap)
    ymap = [m + k for k in range(m)]
    diff = CurvePolynomial.var(cm.ring, n2, 0) - CurvePolynomial.var(cm.ring, n2, m)
    out = cm.detG[0].remap(ymap, n2).mul(dH, cap)
    for i in range(1, m + 1):
        term = diff.mul(dH.derivative(m + i - 1), cap).mul(cm.detG[i - 1].remap(ymap, n2), cap)
        out = out + term if i % 2 == 1 else out - term
    out.check_homogeneous(tuple(cm.a) * 2, numerator_degree(cm.td), "d_Q Omega numerator")
    return out


class BilinearData:
    """``c~``, ``c`` and ``c-bar`` tables plus the ``q`` table for one expansion set."""

    def __init__(self, es: ExpansionSet, cap: int):
        self.es = es
        self.cm = es.cm
        self.td = es.td
        self.ring = es.ring
        self.cap = cap
        td = self.td
        self.top = numerator_degree(td)
        self.numerator = dq_omega_numerator(self.cm, cap)
        self.tilde_c = self._tilde_c()
        self.c = self._eta_c()
        self.c_bar = self._c_bar()
        self.q, self.A = self._q_table()

    # -- coefficient tables ---------------------------------------------------

    def _tilde_c(self) -> dict:
        td = self.td
        out = self.cm.normal_form2(self.numerator, self.cap)
        for (e, f), v in out.items():
            _check_entry("c~", (e, f), v, self.top - td.order(e) - td.order(f))
        return out

    def _eta_c(self) -> dict:
        """``c_{i;j}`` for ``order(i) < order(j)`` via the symmetry recurrences."""
        td = self.td
        zero = self.ring.zero
        tc = self.tilde_c
        total = 2 * (2 * td.genus - 1)
        boxes = [td.canonical_rep(v) for v in range(total + 1)]
        boxes = [e for e in boxes if e is not None]
        memo: dict = {}

        def e1(e, k):
            return (e[0] + k,) + tuple(e[1:])

        def c(i, j):
            if i[0] < 0 or j[0] < 0:
                return zero
            oi, oj = td.order(i), td.order(j)
            if oi >= oj or oi + oj > total:
                return zero
            key = (i, j)
            hit = memo.get(key)
            if hit is not None:
                return hit
            v = tc.get((e1(j, 2), i), zero) - tc.get((i, e1(j, 2)), zero)
            if i[0] >= 1:
                v = v + c(e1(i, -1), e1(j, 1)).scale(2)
            if i[0] >= 2:
                v = v - c(e1(i, -2), e1(j, 2))
            memo[key] = v
            return v

        out = {}
        for i in boxes:
            for j in boxes:
                oi, oj = td.order(i), td.order(j)
                if oi < oj and oi + oj <= total:
                    v = c(i, j)
                    if v:
                        _check_entry("c", (i, j), v, total - oi - oj)
                        out[(i, j)] = v
        for (i, j) in out:
            if td.order(i) >= td.order(j):
                raise WindowExceeded(f"c{(i, j)} outside the window order(i) < order(j)")
        return out

    def _c_bar(self) -> dict:
        """Coefficients of ``F(P, Q)``: ``c~ + (x_1 - y_1)^2 * sum c x^i y^j``."""
        td = self.td
        raw = {k: dict(v.terms) for k, v in self.tilde_c.items()}
        for (i, j), v in self.c.items():
            for di, dj, s in ((2, 0, 1), (1, 1, -2), (0, 2, 1)):
                key = ((i[0] + di,) + i[1:], (j[0] + dj,) + j[1:])
                addscaled(raw.setdefault(key, {}), v.terms, s)
        out = {k: LambdaPolynomial(self.ring, v) for k, v in raw.items() if clean(v)}
        for (e, f), v in out.items():
            _check_entry("c-bar", (e, f), v, self.top - td.order(e) - td.order(f))
        return out

    # -- expansion ------------------------------------------------------------

    def _q_table(self):
        es, td, ring, cap = self.es, self.td, self.ring, self.cap
        a1 = td.a[0]
        T_A = cap - 2 + 2 * a1
        rel = cap
        omega1 = es.Omega1(rel)
        phis: dict = {}
        for e in {k for pair in self.c_bar for k in pair}:
            X = es.monomial_series(e, rel).shift(-td.order(e))
            phis[e] = X.mul(omega1, max_weight=cap).shift(2 * a1)
        # G_e(t_Q) = sum_f c-bar_{e,f} Phi_f(t_Q)
        G: dict = {}
        for (e, f), v in sorted(self.c_bar.items()):
            acc = G.setdefault(e, {})
            for k, c in phis[f].items():
                addmul(acc.setdefault(k, {}), v.terms, c.terms, ring.cap_key(cap))
        raw: dict = {}
        ckey = ring.cap_key(cap)
        for e, gq in G.items():
            for i, pi in phis[e].items():
                for j, cj in gq.items():
                    if i + j > T_A or not cj:
                        continue
                    addmul(raw.setdefault((i, j), {}), pi.terms, cj, ckey)
        entries = {}
        for (i, j), v in raw.items():
            if not clean(v):
                continue
            if i < 0 or j < 0:
                raise NonzeroRemainder(f"expansion of the bidifferential has a pole term t_P^{i} t_Q^{j}")
            entries[(i, j)] = LambdaPolynomial(ring, v)
        A = BiSeries(ring, entries, T_A)
        A.assert_symmetric("bidifferential numerator")
        P1 = es.P(1, rel)
        eraw: dict = {}
        for k, v in P1.items():
            addscaled(eraw.setdefault((k, a1), {}), v.terms, 1)
            addscaled(eraw.setdefault((a1, k), {}), v.terms, -1)
        E = BiSeries.from_raw(ring, eraw, rel + a1)
        nu = E.mul(E, max_weight=cap).divide_diagonal().divide_diagonal()
        self.nu = nu.truncate(min(nu.prec, T_A))
        Q = solve_q(A, self.nu)
        q = {}
        for (i, j), v in Q.c.items():
            _check_entry("q", (i + 1, j + 1), v, i + j + 2)
            q[(i + 1, j + 1)] = v
        return QTable(ring, q, cap), A


def solve_q(A: BiSeries, nu: BiSeries) -> BiSeries:
    """``((A - nu) / (t_P - t_Q)^2) / nu``: the regular part of the bidifferential.

    Both diagonal divisions must be exact; ``NonzeroRemainder`` otherwise.
    """
    R = (A - nu).divide_diagonal().divide_diagonal()
    Q = R.divide(nu)
    Q.assert_symmetric("q table")
    return Q


class QTable:
    """``q_{i,j}`` for ``i + j <= cap``; symmetric, graded."""

    def __init__(self, ring, entries: dict, cap: int):
        self.ring = ring
        self.entries = entries
        self.cap = cap

    def __call__(self, i: int, j: int) -> LambdaPolynomial:
        if i + j > self.cap:
            raise TruncationExceeded(f"q_{{{i},{j}}} needs weight {i + j} > cap {self.cap}")
        return self.entries.get((i, j), self.ring.zero)

    def to_json(self) -> list:
        return [
            {"i": i, "j": j, "q": v.to_json()}
            for (i, j), v in sorted(self.entries.items())
        ]


def bilinear_data(es: ExpansionSet, cap: int) -> BilinearData:
    return BilinearData(es, cap)
