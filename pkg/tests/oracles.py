"""Independent reference implementations used by the tests.

Nothing here imports the package's arithmetic: semigroup data by brute force,
Schur functions and curve expansions with sympy, the Weierstrass sigma series
from its classical coefficient recurrence.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, gcd, prod
from functools import reduce

import sympy as sp


# -- semigroups ---------------------------------------------------------------


def brute_semigroup(a, limit):
    """Elements of <a> up to ``limit``: ``v`` is reachable if some ``v - a_i`` is."""
    member = [False] * (limit + 1)
    member[0] = True
    for v in range(1, limit + 1):
        member[v] = any(v >= x and member[v - x] for x in a)
    return {v for v in range(limit + 1) if member[v]}


def brute_gaps(a):
    frob_bound = max(a) ** 2 + 1
    members = brute_semigroup(a, frob_bound)
    return [v for v in range(frob_bound) if v not in members]


def prefix_gcds(a):
    out, g = [], 0
    for x in a:
        g = gcd(g, x)
        out.append(g)
    return out


def brute_is_telescopic(a):
    if len(a) < 2 or min(a) < 2 or reduce(gcd, a) != 1:
        return False
    d = prefix_gcds(a)
    for i in range(1, len(a)):
        gens = [x // d[i - 1] for x in a[:i]]
        if a[i] // d[i] not in brute_semigroup(gens, a[i] // d[i]):
            return False
    return True


def brute_reps(a, value):
    """All ``k`` with ``sum a_i k_i = value`` and ``0 <= k_i < d_{i-1}/d_i`` for ``i >= 2``."""
    d = prefix_gcds(a)
    ranges = [range(value // a[0] + 1)] + [range(d[i - 1] // d[i]) for i in range(1, len(a))]
    return [k for k in product(*ranges) if sum(x * y for x, y in zip(a, k)) == value]


def telescopic_from_choices(ratios, picks):
    """Build a telescopic sequence from ratios ``n_2..n_m`` and semigroup picks.

    ``a_1 = prod n_i``; ``a_i = d_i * s_i`` where ``s_i`` is a combination of
    the earlier ``a_j/d_{i-1}`` coprime to ``n_i``.  Returns ``None`` when the
    picks do not give a valid entry.
    """
    m = len(ratios) + 1
    d = [1] * m
    for i in range(m - 2, -1, -1):
        d[i] = d[i + 1] * ratios[i]
    a = [d[0]]
    for i in range(1, m):
        gens = [x // d[i - 1] for x in a]
        s = sum(g * c for g, c in zip(gens, picks[i - 1]))
        if s < 1 or gcd(s, ratios[i - 1]) != 1 or d[i] * s < 2:
            return None
        a.append(d[i] * s)
    return tuple(a)


@lru_cache(maxsize=None)
def telescopic_pool(max_entry=30, max_m=4):
    """Every sequence the constructive generator reaches with entries <= max_entry."""
    out = set()
    for m in range(2, max_m + 1):
        for ratios in product(range(2, 6), repeat=m - 1):
            if prod(ratios) > max_entry:
                continue
            pick_space = [list(product(range(0, 6), repeat=i + 1)) for i in range(m - 1)]
            for picks in product(*pick_space):
                a = telescopic_from_choices(ratios, picks)
                if a is not None and max(a) <= max_entry:
                    out.add(a)
    return sorted(out)


# -- Weierstrass sigma ----------------------------------------------------------


@lru_cache(maxsize=None)
def weierstrass_a(m, n):
    """Coefficients of sigma = sum a_{m,n} (g2/2)^m (2 g3)^n u^{4m+6n+1} / (4m+6n+1)!."""
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0 and n == 0:
        return Fraction(1)
    return (
        3 * (m + 1) * weierstrass_a(m + 1, n - 1)
        + Fraction(16, 3) * (n + 1) * weierstrass_a(m - 2, n + 1)
        - Fraction(1, 3) * (2 * m + 3 * n - 1) * (4 * m + 6 * n - 1) * weierstrass_a(m - 1, n)
    )


def weierstrass_hurwitz(g2, g3, max_degree):
    """``{k: Hurwitz coefficient of u^k}`` (i.e. coefficient times k!), as sympy expressions."""
    out = {}
    for m in range(max_degree // 4 + 1):
        for n in range(max_degree // 6 + 1):
            k = 4 * m + 6 * n + 1
            if k <= max_degree:
                a = weierstrass_a(m, n)
                val = sp.Rational(a.numerator, a.denominator) * (g2 / 2) ** m * (2 * g3) ** n
                out[k] = sp.expand(out.get(k, 0) + val)
    return out


# -- expansions of y^2 + ... = x^3 + ... with t = x/y -------------------------------


def _tmul(f, g, order):
    return [sp.expand(sum(f[i] * g[k - i] for i in range(k + 1))) for k in range(order + 1)]


def weierstrass_curve_expansion(order):
    """``X`` with ``x = t^-2 X``, ``y = t^-3 X`` for the (2,3) curve, through ``t^order``.

    Curve: ``y^2 = x^3 + l20 x^2 + l11 x y + l10 x + l01 y + l00`` and
    ``t = x/y``.  Multiplying by ``t^6`` gives ``X^2 - X^3 + (...) = 0`` whose
    linear part at ``X = 1`` is ``-1``; each fixed point step fixes one more
    coefficient.  Series are coefficient lists truncated at ``order``.
    """
    l00, l10, l01, l20, l11 = sp.symbols("lam2_0_0 lam2_1_0 lam2_0_1 lam2_2_0 lam2_1_1")
    X = [sp.Integer(1)] + [sp.Integer(0)] * order
    for _ in range(order):
        X2 = _tmul(X, X, order)
        X3 = _tmul(X2, X, order)

        def sh(f, k):
            return [sp.Integer(0)] * k + f[: order + 1 - k]

        F = [
            X2[k] - X3[k] - sh(X2, 1)[k] * l11 - sh(X, 3)[k] * l01 - sh(X2, 2)[k] * l20 - sh(X, 4)[k] * l10
            - (l00 if k == 6 else 0)
            for k in range(order + 1)
        ]
        X = [sp.expand(x + f) for x, f in zip(X, F)]
    return X


# -- Schur functions ------------------------------------------------------------


def schur_oracle(mu, gaps):
    """``S_mu`` with ``T_{w_i} = u_i`` (others zero) via sympy series and determinant."""
    z = sp.Symbol("z")
    us = sp.symbols(f"u1:{len(gaps) + 1}")
    size = sum(mu)
    gen = sp.exp(sum(u * z**w for u, w in zip(us, gaps)))
    ser = sp.series(gen, z, 0, size + 1).removeO()
    p = [sp.expand(ser.coeff(z, k)) for k in range(size + 1)]

    def pk(k):
        return p[k] if 0 <= k <= size else 0

    L = len(mu)
    M = sp.Matrix(L, L, lambda r, c: pk(mu[r] - r + c))
    return sp.expand(M.det()), us


# -- conversions ----------------------------------------------------------------


def to_sympy(poly):
    """LambdaPolynomial -> sympy expression in symbols named after the ring."""
    ring = poly.ring
    syms = [sp.Symbol(n) for n in ring.names]
    out = 0
    for key, c in poly.terms.items():
        term = sp.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for s, e in zip(syms, ring.exps(key)):
            term *= s**e
        out += term
    return sp.expand(out)


def useries_to_sympy(series):
    us = sp.symbols(f"u1:{series.g + 1}")
    out = 0
    for n, v in series.terms.items():
        term = to_sympy(v)
        for u, k in zip(us, n):
            term *= u**k
        out += term
    return sp.expand(out), us


def hurwitz(n):
    out = 1
    for k in n:
        out *= factorial(k)
    return out


# -- the (2,3) bidifferential along the ray t_Q = v t_P --------------------------------


def q_table_oracle_23(values, cap):
    """``{(i, j): q_ij}`` for ``i + j <= cap`` at numeric lambda ``values`` (dict by name).

    Classical route: the third-kind differential
    ``Omega = (y_P + y_Q - l11 x_Q - l01) / (x_P - x_Q) * dx_P / f_y(P)`` with
    ``omega_hat = d_Q Omega + du(P) x_Q du(Q)``; the constant in front of the
    last term is the only one that removes the pole at ``Q = oo``.  Along
    ``t_Q = v t_P`` (inside ``|t_Q| < |t_P|``) the coefficient of ``t_P^d``
    after removing ``1/(t_P - t_Q)^2`` is ``sum_j q_{d+2-j, j} v^(j-1)``.
    """
    s, v = sp.symbols("s v")
    names = ["lam2_0_0", "lam2_1_0", "lam2_0_1", "lam2_2_0", "lam2_1_1"]
    sub = {sp.Symbol(n): sp.Rational(str(values.get(n, 0))) for n in names}
    l00, l10, l01, l20, l11 = (sub[sp.Symbol(n)] for n in names)
    n = cap + 2  # s-exponents kept, after the s^8 shift below
    Xc = [sp.expand(x.subs(sub)) for x in weierstrass_curve_expansion(n + 2)]
    A = sum(x * s**k for k, x in enumerate(Xc))
    B = A.subs(s, v * s)
    dA = -2 * A + s * sp.diff(A, s)  # s^3 dx_P/ds
    dB = dA.subs(s, v * s)  # (v s)^3 dx_Q/dt_Q
    xP, yP = A / s**2, A / s**3
    xQ, yQ = B / (v * s) ** 2, B / (v * s) ** 3

    def fy(x, y):
        return 2 * y - l11 * x - l01

    def fx(x, y):
        return -3 * x**2 - 2 * l20 * x - l11 * y - l10

    # numerator of d_Q Omega (y_Q' = -f_x/f_y) plus the du x du correction
    F = (-fx(xQ, yQ) - l11 * fy(xQ, yQ)) * (xP - xQ) + (yP + yQ - l11 * xQ - l01) * fy(xQ, yQ)
    F = F + xQ * (xP - xQ) ** 2

    def series(expr):
        p = sp.Poly(sp.expand(expr), s, v)
        out = [sp.Poly(0, v, domain="QQ") for _ in range(n + 1)]
        for (i, j), c in p.terms():
            if i <= n:
                out[i] += sp.Poly(c * v**j, v, domain="QQ")
        return out

    def mul(f, g):
        return [sum((f[i] * g[k - i] for i in range(k + 1)), sp.Poly(0, v, domain="QQ")) for k in range(n + 1)]

    # omega/(ds dr) = F s^4 v^4 dA dB / ((v^2 A - B)^2 f_P f_Q) with f_P = s^3 f_y(P), f_Q = (vs)^3 f_y(Q);
    # F s^8 v^6 is a polynomial, so the extra v^6 is divided out at the end
    top = mul(mul(series(F * s**8 * v**10), series(dA)), series(dB))
    den = mul(mul(series((v**2 * A - B) ** 2), series(2 * A - l11 * s * A - l01 * s**3)),
              series(2 * B - l11 * v * s * B - l01 * v**3 * s**3))
    d0 = den[0]
    P = [sp.Poly(1, v, domain="QQ")]
    for k in range(1, n + 1):
        P.append(-sum((den[i] * P[k - i] * d0 ** (i - 1) for i in range(1, k + 1)), sp.Poly(0, v, domain="QQ")))
    scale = sp.Poly(v**6, v, domain="QQ")
    q = {}
    for k in range(4, n + 1):
        R = sum((top[i] * P[k - i] * d0**i for i in range(k + 1)), sp.Poly(0, v, domain="QQ"))
        quo, rem = R.div(d0 ** (k + 1) * scale)
        if not rem.is_zero:
            raise ArithmeticError(f"t_P^{k - 4} coefficient is not a polynomial in v")
        d = k - 4
        for j in range(1, d + 2):
            q[(d + 2 - j, j)] = quo.coeff_monomial(v ** (j - 1))
        if quo.degree() > d:
            raise ArithmeticError(f"t_P^{d} coefficient has degree {quo.degree()} in v")
    return q
