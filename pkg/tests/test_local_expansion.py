import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from helpers import expansion, td_of
from oracles import telescopic_pool, to_sympy, weierstrass_curve_expansion
from telesigma.curve_model import build_curve
from telesigma.errors import DeterminantMismatch, TruncationExceeded
from telesigma.local_expansion import ExpansionSet, build_D, choose_b, int_det, int_inverse
from telesigma.semigroup import validate_telescopic

POOL = telescopic_pool()


def test_choose_b_examples():
    assert choose_b(td_of((2, 3))) == (1, -1)
    td = td_of((4, 6, 5))
    b = choose_b(td)
    assert b == (-2, 2, -1)
    assert build_D(td, b) == [[-3, 2, 0], [-1, -1, 2], [-2, 2, -1]]
    assert int_det(build_D(td, b)) == -1


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(POOL), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_det_D_is_sign_for_any_local_parameter(a, shifts):
    td = validate_telescopic(a)
    b = list(choose_b(td))
    assert sum(x * y for x, y in zip(a, b)) == -1
    # move b along the kernel of a: still a valid local parameter
    for k, s in enumerate(shifts[: td.m - 1]):
        b[k] += s * a[k + 1]
        b[k + 1] -= s * a[k]
    D = build_D(td, b)
    assert int_det(D) == (-1) ** td.m
    inv = int_inverse(D)
    n = len(D)
    assert [[sum(D[i][k] * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)] == [
        [int(i == j) for j in range(n)] for i in range(n)
    ]


def test_bad_local_parameter_rejected():
    with pytest.raises(DeterminantMismatch):
        build_D(td_of((2, 3)), (1, 1))


def test_23_expansion_matches_sympy_oracle():
    order = 10
    oracle = weierstrass_curve_expansion(order)
    es = expansion((2, 3))
    for i in (1, 2):
        P = es.P(i, order)
        for k in range(order + 1):
            assert sp.expand(to_sympy(P.coeff(k)) - oracle[k]) == 0, (i, k)


@pytest.mark.parametrize("a, order", [((2, 3), 12), ((2, 5), 10), ((3, 4), 8), ((4, 6, 5), 10)])
def test_coefficients_integral_and_graded(a, order):
    es = expansion(a)
    td = es.td
    for i in range(1, td.m + 1):
        for k in range(order + 1):
            p = es.p_coeff(i, k)
            assert p.is_integral()
            assert p.is_homogeneous(k)
    # the curve equations vanish on the expansion and t is recovered
    for f in es.cm.F:
        deg = td.eq_degree(es.cm.F.index(f) + 2)
        assert es.expand(f, order, lead=deg).is_zero()
    tc = es.t_check(order)
    assert tc.coeff(1) == 1 and all(tc.coeff(k) == 0 for k in range(2, order + 2))


@pytest.mark.parametrize("a", [(2, 3), (2, 5), (4, 6, 5)])
def test_omega_leading_terms(a):
    es = expansion(a)
    td = es.td
    for i in range(1, td.genus + 1):
        s = es.omega(i, 8)
        v, lead = s.leading()
        assert v == td.gaps[i - 1] - 1 and lead == 1
    es.gauge_identity(8)


@pytest.mark.parametrize("a", [(2, 3), (2, 5), (4, 6, 5)])
def test_twice_c_is_integral(a):
    es = expansion(a)
    for k in range(1, 2 * es.td.genus + 1):
        c = es.c_coeff(k)
        assert c.scale(2).is_integral()
        assert c.is_homogeneous(k)


def test_gauge_changes_the_expansion():
    e1 = expansion((2, 3), (1, -1))
    e2 = expansion((2, 3), (-2, 1))
    assert [e1.p_coeff(1, k) for k in range(1, 6)] != [e2.p_coeff(1, k) for k in range(1, 6)]
    assert e2.t_check(8).coeff(1) == 1


def test_truncation_order_is_enforced():
    td = td_of((2, 3))
    es = ExpansionSet(build_curve(td), None, t_order=4)
    es.P(1, 4)
    with pytest.raises(TruncationExceeded):
        es.P(1, 5)
