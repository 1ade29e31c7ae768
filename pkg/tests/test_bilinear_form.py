import pytest
from hypothesis import given, settings, strategies as st

from helpers import bilinear
from oracles import q_table_oracle_23
from telesigma.algebra import BiSeries
from telesigma.bilinear_form import numerator_degree, solve_q
from telesigma.errors import NonzeroRemainder, SymmetryViolation

CURVES = [((2, 3), 12), ((2, 5), 14), ((3, 4), 10), ((4, 6, 5), 10)]
WIDE = [((2, 3), 10), ((2, 5), 10), ((3, 4), 10), ((4, 6, 5), 14)]


@pytest.mark.parametrize("a, cap", WIDE)
def test_q_symmetric_integral_graded(a, cap):
    bd = bilinear(a, cap, None, None, cap)
    q = bd.q
    assert q.entries
    for (i, j), v in q.entries.items():
        assert i + j <= q.cap
        assert v.is_integral()
        assert v.is_homogeneous(i + j)
        assert q(j, i) == v


@pytest.mark.parametrize("a, W", CURVES)
def test_tables_are_graded(a, W):
    bd = bilinear(a, W)
    td = bd.td
    top = numerator_degree(td)
    for (e, f), v in bd.c_bar.items():
        assert v.is_homogeneous(top - td.order(e) - td.order(f))
    bd.A.assert_symmetric()


@pytest.mark.parametrize("a, cap", CURVES + WIDE)
def test_diagonal_divisions_leave_no_remainder(a, cap):
    bd = bilinear(a, cap, None, None, cap)
    A, nu = bd.A, bd.nu
    R = A - nu
    once = R.divide_diagonal()
    twice = once.divide_diagonal()
    diag = BiSeries(A.ring, {(1, 0): A.ring.one, (0, 1): -A.ring.one})
    assert diag.mul(diag).mul(twice).truncate(R.prec) == R
    Q = solve_q(A, nu)
    assert {(i + 1, j + 1): v for (i, j), v in Q.c.items()} == bd.q.entries


def test_perturbed_numerator_is_rejected():
    bd = bilinear((2, 3), 8, None, None, 8)
    ring = bd.A.ring
    bump = BiSeries(ring, {(1, 1): ring.one}, bd.A.prec)
    with pytest.raises(NonzeroRemainder):
        solve_q(bd.A + bump, bd.nu)
    skew = BiSeries(ring, {(0, 3): ring.one, (3, 0): -ring.one}, bd.A.prec)
    with pytest.raises((NonzeroRemainder, SymmetryViolation)):
        solve_q(bd.A + skew, bd.nu)


def test_q_depends_on_gauge_but_stays_graded():
    q1 = bilinear((2, 3), 8, (1, -1), None, 8).q
    q2 = bilinear((2, 3), 8, (-2, 1), None, 8).q
    assert q1.entries != q2.entries
    for (i, j), v in q2.entries.items():
        assert v.is_homogeneous(i + j)


def test_weierstrass_q_has_only_even_lambda_weights():
    # with only lam2_1_0 (weight 4) and lam2_0_0 (weight 6) every q_{i,j} with i+j odd or 2 vanishes
    bd = bilinear((2, 3), 10, None, ("lam2_1_0", "lam2_0_0"), 10)
    for (i, j), v in bd.q.entries.items():
        assert (i + j) % 2 == 0 and i + j >= 4


def _q_at(q, values):
    from telesigma.algebra import LambdaRing

    ring = q.ring
    vv = {ring.index(k): x for k, x in values.items()}
    out = {k: v.substitute(vv, LambdaRing([])).constant_value() for k, v in q.entries.items()}
    return {k: v for k, v in out.items() if v}


def test_q_matches_classical_bidifferential_oracle():
    values = {"lam2_0_0": 3, "lam2_1_0": -2, "lam2_0_1": 5, "lam2_2_0": 1, "lam2_1_1": 7}
    want = q_table_oracle_23(values, 8)
    got = _q_at(bilinear((2, 3), 8, None, None, 8).q, values)
    assert {k: v for k, v in want.items() if v} == got


@settings(max_examples=6, deadline=None)
@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=3), min_size=5, max_size=5))
def test_q_oracle_at_random_points(vals):
    names = ["lam2_0_0", "lam2_1_0", "lam2_0_1", "lam2_2_0", "lam2_1_1"]
    values = dict(zip(names, vals))
    want = q_table_oracle_23(values, 6)
    got = _q_at(bilinear((2, 3), 6, None, None, 6).q, values)
    assert {k: v for k, v in want.items() if v} == got
