import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critline.errors import DenominatorZeroError, PreconditionError
from critline.phase import (
    LEDGER_COLUMNS,
    VARIANTS,
    QuadrupleHypothesis,
    critical_point_scan,
    d_denominator,
    d_gradient,
    default_hypotheses,
    default_t_samples,
    direct_arg,
    paper_phase_term,
    phase_audit,
    phase_ledger,
    phase_sum,
    phase_sum_direct,
    quadruple_factor_product,
    residual_mod_pi,
    z_denominator,
    z_gradient,
)

sigmas = st.floats(0.01, 0.49)
taus = st.floats(0.1, 60.0)


def test_hypothesis_validation():
    h = QuadrupleHypothesis(0.25, 10.0)
    assert h.alpha == 0.0625
    assert len(set(h.zeros)) == 4
    assert h.t0 == pytest.approx(math.sqrt(100.0625))
    for bad in ((0.0, 1.0), (0.5, 1.0), (0.2, 0.0), (0.2, -3.0)):
        with pytest.raises(PreconditionError):
            QuadrupleHypothesis(*bad)
    with pytest.raises(PreconditionError):
        paper_phase_term(1.0, h, "t-cubed")


@settings(max_examples=100, deadline=None)
@given(sigmas, taus, st.floats(-50, 50))
def test_quadruple_product_is_real_positive(sigma, tau, t):
    h = QuadrupleHypothesis(sigma, tau)
    p = quadruple_factor_product(t, h)
    assert p.real > 0
    assert abs(p.imag) <= 1e-12 * abs(p)
    assert abs(direct_arg(t, h)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(sigmas, taus)
def test_term_vanishes_at_zero_and_t0(sigma, tau):
    h = QuadrupleHypothesis(sigma, tau)
    for v in VARIANTS:
        assert paper_phase_term(0.0, h, v) == 0.0
        try:
            assert abs(paper_phase_term(h.t0, h, v)) < 1e-12
        except DenominatorZeroError:
            pass


@settings(max_examples=100, deadline=None)
@given(sigmas, taus, st.floats(0.01, 50))
def test_term_is_odd_in_t(sigma, tau, t):
    # the t^2 variant has an even denominator, so the term is odd in t
    h = QuadrupleHypothesis(sigma, tau)
    try:
        a = paper_phase_term(t, h, "t-squared")
        b = paper_phase_term(-t, h, "t-squared")
    except DenominatorZeroError:
        return
    assert abs(a + b) <= 1e-15


def test_exact_term_value():
    # sigma = 1/4, tau = 2, t = 1 with exact rational arithmetic
    from fractions import Fraction as Fr

    alpha, tau, t = Fr(1, 16), Fr(2), Fr(1)
    tt = t * t + tau * tau
    num = 2 * t * Fr(1, 2) * (t * t - tau * tau - alpha)
    for variant, k in (("as-printed", 3), ("t-squared", 2)):
        den = tt * tt + alpha * (alpha - 3 * t**k - tau * tau)
        h = QuadrupleHypothesis(0.25, 2.0)
        assert paper_phase_term(1.0, h, variant) == pytest.approx(math.atan(num / den), abs=1e-16)


def test_denominator_zero_raises():
    # bisect onto the t^2 variant's denominator zero set near t = 0.6
    h = QuadrupleHypothesis(0.01, 0.1)
    ts = np.linspace(0.01, 2, 2001)
    den = [z_denominator(h.sigma, h.tau, t, "t-squared") for t in ts]
    i = next(k for k in range(len(den) - 1) if den[k] * den[k + 1] < 0)
    lo, hi = ts[i], ts[i + 1]
    for _ in range(200):
        m = 0.5 * (lo + hi)
        if z_denominator(h.sigma, h.tau, m, "t-squared") * z_denominator(h.sigma, h.tau, lo, "t-squared") > 0:
            lo = m
        else:
            hi = m
    with pytest.raises(DenominatorZeroError):
        paper_phase_term(lo, h, "t-squared")
    rows = phase_ledger([lo], [h])
    assert math.isnan(rows[1]["paper_term"]) and not math.isnan(rows[0]["paper_term"])


def test_residual_mod_pi():
    assert residual_mod_pi(math.pi + 0.1, 0.1) == pytest.approx(0, abs=1e-15)
    assert residual_mod_pi(0.3, 0.1) == pytest.approx(0.2)
    assert residual_mod_pi(-2 * math.pi, 0.0) == pytest.approx(0, abs=1e-15)


def test_phase_sums():
    hs = [QuadrupleHypothesis(0.2, 5.0), QuadrupleHypothesis(0.4, 9.0)]
    assert phase_sum(0.0, hs) == 0.0
    assert abs(phase_sum_direct(3.0, hs)) < 1e-12
    assert phase_sum(3.0, hs, "t-squared") == pytest.approx(
        sum(paper_phase_term(3.0, h, "t-squared") for h in hs)
    )


def test_ledger_shape():
    hs = default_hypotheses()
    ts = default_t_samples()
    assert len(hs) == 400 and len(ts) == 20
    assert all(0 < h.sigma < 0.5 and h.tau > 0 for h in hs)
    rows = phase_ledger(ts[:3], hs[:5])
    assert len(rows) == 3 * 5 * 2
    assert set(rows[0]) == set(LEDGER_COLUMNS)


def test_phase_audit_summary():
    rows, summ = phase_audit()
    assert summ["rows"] == 400 * 20 * 2 == len(rows)
    for v in VARIANTS:
        assert summ[v]["max_abs_term_at_zero"] == 0.0
        assert summ[v]["max_abs_term_t0"] < 1e-12
    assert summ["max_abs_direct_arg"] < 1e-12
    # both closed forms disagree with the direct argument somewhere
    assert summ["as-printed"]["max_residual_mod_pi"] > 1e-3
    assert summ["t-squared"]["max_residual_mod_pi"] > 1e-3


@settings(max_examples=200, deadline=None)
@given(st.floats(0.005, 0.995), st.floats(0.1, 50))
def test_d_gradient_matches_fd(sigma, tau):
    h = 1e-5
    g = d_gradient(sigma, tau)
    fd = ((d_denominator(sigma + h, tau) - d_denominator(sigma - h, tau)) / (2 * h),
          (d_denominator(sigma, tau + h) - d_denominator(sigma, tau - h)) / (2 * h))
    n = math.hypot(*g)
    assert math.hypot(g[0] - fd[0], g[1] - fd[1]) <= 1e-6 * n


@settings(max_examples=200, deadline=None)
@given(st.floats(0.005, 0.995), st.floats(0.1, 50), st.floats(0.1, 50), st.sampled_from(VARIANTS))
def test_z_gradient_matches_fd(sigma, tau, t, variant):
    h = 1e-5
    g = z_gradient(sigma, tau, t, variant)
    f = lambda a, b, c: z_denominator(a, b, c, variant)  # noqa: E731
    fd = ((f(sigma + h, tau, t) - f(sigma - h, tau, t)) / (2 * h),
          (f(sigma, tau + h, t) - f(sigma, tau - h, t)) / (2 * h),
          (f(sigma, tau, t + h) - f(sigma, tau, t - h)) / (2 * h))
    n = math.sqrt(sum(x * x for x in g))
    assert math.sqrt(sum((a - b) ** 2 for a, b in zip(g, fd))) <= 1e-6 * n


def test_d_symmetry():
    # D is a polynomial in sigma^2 - sigma combined with tau^2 in this arrangement
    for s, t in ((0.1, 2.0), (0.3, 11.0)):
        assert d_denominator(s, t) == pytest.approx(d_denominator(s, -t))


def test_critical_point_scan_small():
    r = critical_point_scan("D", (0.005, 0.995, 0.05), (0.1, 5.0, 0.5))
    assert r.function == "D" and r.points == 20 * 10
    assert r.max_fd_rel_err < 1e-6
    r = critical_point_scan("z", (0.005, 0.995, 0.1), (0.1, 5.0, 1.0), (0.1, 5.0, 1.0), variant="t-squared")
    assert r.points == 10 * 5 * 5 and r.max_fd_rel_err < 1e-6
    with pytest.raises(PreconditionError):
        critical_point_scan("w")
