import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critline.dirichlet import enumerate_characters, l_function
from critline.epstein import (
    QuadraticForm,
    RectangleRegion,
    class_number,
    epstein_continued,
    epstein_direct,
    epstein_lambda,
    functional_residual_epstein,
    reduced_forms,
    winding_number,
    zero_search_rectangle,
)
from critline.errors import ConvergenceRegionError, PoleError, PreconditionError
from critline.zeta import zeta

# mpmath lattice sums (40 digits)
Z101_2 = 6.026812039691940123546
Z116_2 = 2.438532452560922738200
Z116_3 = 2.065501539658260117917
Z325_2 = 0.4561615737435108801774
Z116_2_5I = complex(1.975157513223574785973, -0.05303123757852619142473)
ZERO_325 = complex(0.796426151863882709670711, 18.810999532673993800702871)
ZERO_207 = complex(0.77789192723671242713931, 23.17273351754988206866)

F101, F116, F325 = QuadraticForm(1, 0, 1), QuadraticForm(1, 1, 6), QuadraticForm(3, 2, 5)


def test_form_validation():
    assert F116.delta == 23 and str(F116) == "(1,1,6)"
    assert F101(2, 3) == 13
    lo, hi = QuadraticForm(2, 0, 7).eigenvalues()
    assert (lo, hi) == (2.0, 7.0)
    for bad in ((0, 0, 1), (1, 2, 1), (-1, 0, -1), (1.5, 0, 1)):
        with pytest.raises(PreconditionError):
            QuadraticForm(*bad)


def test_region_validation():
    r = RectangleRegion(0.6, 1.0, 17.5, 20.0)
    assert r.contains(0.8 + 18j) and not r.contains(0.5 + 18j)
    assert r.expanded(0.1).sigma_lo == pytest.approx(0.5)
    with pytest.raises(PreconditionError):
        RectangleRegion(1.0, 0.5, 1, 2)
    with pytest.raises(PreconditionError):
        RectangleRegion(0.5, 1.0, -1.0, 1.0)  # right edge through s = 1
    with pytest.raises(PreconditionError):
        RectangleRegion(-0.5, 0.5, 0.0, 2.0)  # bottom edge through s = 0


def test_values_against_high_precision():
    for q, s, ref in ((F101, 2, Z101_2), (F116, 2, Z116_2), (F116, 3, Z116_3), (F325, 2, Z325_2), (F116, 2 + 5j, Z116_2_5I)):
        assert abs(epstein_continued(s, q).value - ref) < 1e-12 * abs(ref)


@pytest.mark.parametrize("s", [2, 3, 2 + 5j])
@pytest.mark.parametrize("q", [F101, F116, F325])
def test_direct_matches_continued(s, q):
    d = epstein_direct(s, q)
    c = epstein_continued(s, q)
    assert abs(d.value - c.value) <= d.abs_err + c.abs_err


def test_direct_region():
    with pytest.raises(ConvergenceRegionError):
        epstein_direct(1.05, F101)
    with pytest.raises(PreconditionError):
        epstein_direct(2, F101, radius=0)


def test_special_points():
    with pytest.raises(PoleError):
        epstein_continued(1, F101)
    with pytest.raises(PoleError):
        epstein_continued(0, F101)
    # Z(0) = -1 as a limit; trivial zeros at negative integers
    assert abs(epstein_continued(1e-7, F116).value + 1) < 1e-5
    assert epstein_continued(-2, F116).value == 0
    # residue at s = 1 is 2 pi / sqrt(delta)
    h = 1e-6
    res = h * epstein_continued(1 + h, F116).value
    assert abs(res - 2 * math.pi / math.sqrt(23)) < 1e-4


@pytest.mark.parametrize("s", [2, 0.5 + 3j, -1.5 + 7j, 3 - 40j, 0.25 + 100j])
def test_sum_of_two_squares_factorisation(s):
    lhs = epstein_continued(s, F101).value
    rhs = 4 * zeta(s).value * l_function(s, enumerate_characters(4)[1]).value
    assert abs(lhs - rhs) <= 1e-9 * max(abs(rhs), 1e-300)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([F101, F116, F325, QuadraticForm(2, 0, 7)]), st.floats(-1, 2), st.floats(-60, 60))
def test_lambda_symmetry_and_conjugation(q, sigma, t):
    s = complex(sigma, t)
    assert functional_residual_epstein(s, q) < 1e-9
    a = epstein_lambda(s, q).value
    assert abs(epstein_lambda(s.conjugate(), q).value - a.conjugate()) <= 1e-12 * max(abs(a), 1.0)


def test_equivalent_forms_agree():
    # (1,1,6) and (1,-1,6) are equivalent under n -> -n; (6,1,1) under swap
    for s in (2.5, 0.5 + 9j):
        a = epstein_continued(s, F116).value
        assert abs(epstein_continued(s, QuadraticForm(1, -1, 6)).value - a) < 1e-12 * abs(a)
        assert abs(epstein_continued(s, QuadraticForm(6, 1, 1)).value - a) < 1e-12 * abs(a)


def test_class_numbers():
    assert [class_number(d) for d in (3, 4, 7, 8, 11, 15, 20, 23, 56, 84)] == [1, 1, 1, 1, 1, 2, 2, 3, 4, 4]
    assert reduced_forms(56) == [QuadraticForm(1, 0, 14), QuadraticForm(2, 0, 7), QuadraticForm(3, -2, 5), QuadraticForm(3, 2, 5)]
    # delta = 12 has the imprimitive form (2,2,2)
    assert class_number(12) == 1 and class_number(12, primitive=False) == 2
    with pytest.raises(PreconditionError):
        reduced_forms(5)


def test_known_off_line_zeros():
    assert abs(epstein_continued(ZERO_325, F325).value) < 1e-12
    assert abs(epstein_continued(ZERO_207, QuadraticForm(2, 0, 7)).value) < 1e-12


def test_winding_on_analytic_function():
    f = lambda s: (s - (0.7 + 18.2j)) * (s - (0.9 + 19.0j)) * (s - 5)  # noqa: E731
    w = winding_number(f, RectangleRegion(0.6, 1.0, 17.5, 20.0), 0.05)
    assert w.winding == 2


def test_zero_search_finds_off_line_zero():
    res = zero_search_rectangle(F325, RectangleRegion(0.6, 1.0, 17.5, 20.0), 0.05)
    assert res.winding == 1 and len(res.zeros) == 1
    assert abs(res.zeros[0] - ZERO_325) < 1e-9
    assert res.residuals[0] < 1e-9


def test_zero_search_control_form():
    res = zero_search_rectangle(F101, RectangleRegion(0.6, 1.0, 17.5, 20.0), 0.05)
    assert res.winding == 0 and res.zeros == []
