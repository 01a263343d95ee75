"""Shared special-function kernels.

Double precision throughout.  Every evaluator returns an :class:`EvalResult`
carrying a heuristic absolute-error estimate next to the value; audits
compare residuals against the propagated estimates rather than assuming
exactness.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PoleError, PreconditionError

EPS = 2.220446049250313e-16
POLE_TOL = 1e-14
BERNOULLI_MAX = 60

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class EvalResult:
    """A complex value paired with an absolute-error estimate (not a bound)."""

    value: complex
    abs_err: float

    def __post_init__(self):
        if not math.isfinite(self.abs_err) or self.abs_err < 0:
            raise ValueError(f"abs_err must be finite and >= 0, got {self.abs_err!r}")
        object.__setattr__(self, "value", complex(self.value))

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def __abs__(self) -> float:
        return abs(self.value)

    def rel_err(self) -> float:
        mag = abs(self.value)
        return self.abs_err / mag if mag > 0 else math.inf


@dataclass(frozen=True)
class EMParams:
    """Truncation parameters of the Euler-Maclaurin evaluators.

    ``cutoff_n`` direct terms are summed; ``bernoulli_terms`` correction
    terms follow.  One extra Bernoulli number is needed for the remainder
    estimate, hence the upper limit of ``BERNOULLI_MAX - 2``.
    """

    cutoff_n: int = 30
    bernoulli_terms: int = 12

    def __post_init__(self):
        if int(self.cutoff_n) != self.cutoff_n or self.cutoff_n < 2:
            raise PreconditionError(f"cutoff_n must be an integer >= 2, got {self.cutoff_n!r}")
        if not 1 <= self.bernoulli_terms <= BERNOULLI_MAX - 2:
            raise PreconditionError(
                f"bernoulli_terms must lie in [1, {BERNOULLI_MAX - 2}], got {self.bernoulli_terms!r}"
            )

    @classmethod
    def for_point(cls, s: complex) -> "EMParams":
        # keeps the truncation below ~1e-12 for |Im s| <= 60
        return cls(max(30, math.ceil(1.3 * abs(complex(s).imag))), 12)


def check_gamma_pole(s: complex) -> None:
    s = complex(s)
    k = round(s.real)
    if k <= 0 and abs(s - k) < POLE_TOL:
        raise PoleError(f"Gamma has a pole at s = {k}")


@functools.lru_cache(maxsize=None)
def _bernoulli_exact(n_max: int) -> tuple[Fraction, ...]:
    """B_0..B_{n_max} (all indices, B_1 = -1/2) from sum_k C(m+1,k) B_k = 0."""
    b = [Fraction(1)]
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli_numbers(count: int) -> list[float]:
    """Return ``[B_0, B_2, ..., B_{2(count-1)}]`` as floats."""
    if int(count) != count or count < 1:
        raise PreconditionError(f"count must be a positive integer, got {count!r}")
    if count > BERNOULLI_MAX:
        raise PreconditionError(f"count {count} > {BERNOULLI_MAX}: values exceed double precision usefulness")
    table = _bernoulli_exact(2 * (BERNOULLI_MAX - 1))
    return [float(table[2 * k]) for k in range(count)]


def _lanczos_log_gamma(z: complex) -> complex:
    # valid for Re z >= 1/2
    z -= 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _log_sin_pi(z: complex) -> complex:
    """log sin(pi z) up to a multiple of 2 pi i, overflow-free."""
    y = z.imag
    if abs(y) < 20.0:
        return cmath.log(cmath.sin(math.pi * z))
    if y > 0:
        # sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i)
        return -1j * math.pi * z + cmath.log((cmath.exp(2j * math.pi * z) - 1.0) / 2j)
    return 1j * math.pi * z + cmath.log((1.0 - cmath.exp(-2j * math.pi * z)) / 2j)


def _gamma_rel_err(s: complex) -> float:
    m = abs(s) + 1.0
    return 8.0 * EPS * (m * (1.0 + math.log(m)) + 10.0)


def log_gamma(s: complex) -> EvalResult:
    """Principal branch of log Gamma (cut along the negative real axis)."""
    s = complex(s)
    check_gamma_pole(s)
    if s.real >= 0.5:
        v = _lanczos_log_gamma(s)
    else:
        n = math.ceil(0.5 - s.real)
        v = _lanczos_log_gamma(s + n)
        for k in range(n):
            v -= cmath.log(s + k)
    return EvalResult(v, _gamma_rel_err(s))


def complex_gamma(s: complex) -> EvalResult:
    """Gamma(s); reflection formula for Re(s) < 1/2."""
    s = complex(s)
    check_gamma_pole(s)
    if s.real >= 0.5:
        lg = _lanczos_log_gamma(s)
    else:
        lg = math.log(math.pi) - _log_sin_pi(s) - _lanczos_log_gamma(1.0 - s)
    v = cmath.exp(lg)
    return EvalResult(v, abs(v) * _gamma_rel_err(s))


def exprel(u):
    """(exp(u) - 1)/u, equal to 1 at u = 0 (complex, vectorised)."""
    u = np.asarray(u, dtype=complex)
    small = np.abs(u) < 0.1
    out = np.ones_like(u)
    big = ~small
    if np.any(big):
        ub = u[big]
        out[big] = (np.exp(ub) - 1.0) / ub
    if np.any(small):
        us = u[small]
        acc = np.ones_like(us)
        term = np.ones_like(us)
        for k in range(2, 15):
            term = term * us / k
            acc = acc + term
        out[small] = acc
    return out


def csum(values) -> complex:
    """Compensated sum of complex values (real and imaginary parts separately)."""
    arr = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))


def hurwitz_em(s: complex, a, params: EMParams, regular: bool = False):
    """Euler-Maclaurin sum for sum_{n>=0} (n+a)^{-s}, vectorised over ``a``.

    With ``regular=True`` the 1/(s-1) pole part is dropped, which leaves a
    function that is entire in s; callers whose weights sum to zero (non
    principal characters) can then evaluate right through s = 1.

    Returns ``(values, errs)`` as arrays shaped like ``a``.
    """
    s = complex(s)
    a = np.atleast_1d(np.asarray(a, dtype=float))
    N = params.cutoff_n
    M = params.bernoulli_terms
    n = np.arange(N, dtype=float)
    x = n[None, :] + a[:, None]
    direct_terms = np.exp(-s * np.log(x))
    direct = np.array([csum(row) for row in direct_terms])
    mag = np.abs(direct_terms).sum(axis=1)

    X = N + a
    logX = np.log(X)
    XS = np.exp(-s * logX)
    if regular:
        u = (1.0 - s) * logX
        pole = -logX * exprel(u)
    else:
        if abs(s - 1.0) < 1e-12:
            raise PoleError("Hurwitz zeta has a pole at s = 1")
        pole = X * XS / (s - 1.0)
    total = direct + pole + 0.5 * XS
    mag = mag + np.abs(pole) + 0.5 * np.abs(XS)

    bern = _bernoulli_exact(2 * (M + 1))
    poch = s
    pw = XS / X
    for k in range(1, M + 1):
        if k > 1:
            poch *= (s + 2 * k - 3) * (s + 2 * k - 2)
            pw = pw / (X * X)
        term = float(bern[2 * k] / math.factorial(2 * k)) * poch * pw
        total = total + term
        mag = mag + np.abs(term)
    # first omitted term, scaled to the standard remainder bound
    k = M + 1
    poch_next = poch * (s + 2 * k - 3) * (s + 2 * k - 2)
    nxt = abs(float(bern[2 * k] / math.factorial(2 * k))) * abs(poch_next) * np.abs(pw / (X * X))
    trunc = nxt * abs(s + 2 * M + 1) / max(s.real + 2 * M + 1, 1.0)
    errs = trunc + 4.0 * EPS * mag
    return total, errs


def _near_gamma_pole(a: complex, dist: float = 0.5) -> bool:
    k = round(a.real)
    return k <= 0 and abs(a - k) < dist


def upper_gamma(a: complex, z) -> tuple[np.ndarray, np.ndarray]:
    """Upper incomplete gamma Gamma(a, z) for complex a, z with Re z > 0.

    Vectorised over ``z``.  Power series for gamma(a, z) (then
    Gamma(a) - gamma) where |z| < |a| and a is away from the poles of
    Gamma; Legendre continued fraction (modified Lentz) elsewhere.
    Returns ``(values, relative_error_estimates)``.
    """
    a = complex(a)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    use_series = (np.abs(z) < abs(a)) & (not _near_gamma_pole(a))
    logpref = -z + a * np.log(z)
    if np.any(use_series):
        zs = z[use_series]
        term = np.full_like(zs, 1.0 / a)
        tot = term.copy()
        live = np.arange(zs.size)
        for n in range(1, 20000):
            term[live] = term[live] * zs[live] / (a + n)
            tot[live] += term[live]
            live = live[np.abs(term[live]) > EPS * np.abs(tot[live])]
            if live.size == 0:
                break
        out[use_series] = complex_gamma(a).value - np.exp(logpref[use_series]) * tot
    cf = ~use_series
    if np.any(cf):
        zc = z[cf]
        tiny = 1e-300
        b = zc + 1.0 - a
        c = np.full_like(zc, 1.0 / tiny)
        d = 1.0 / b
        h = d.copy()
        live = np.arange(zc.size)
        for i in range(1, 20000):
            # elements drop out once converged; a shared stop test can stall
            # on a single value whose delta jitters at the rounding level
            an = -i * (i - a)
            b[live] += 2.0
            dl = an * d[live] + b[live]
            dl = np.where(np.abs(dl) < tiny, tiny, dl)
            cl = b[live] + an / c[live]
            cl = np.where(np.abs(cl) < tiny, tiny, cl)
            dl = 1.0 / dl
            delta = dl * cl
            d[live], c[live] = dl, cl
            h[live] *= delta
            live = live[np.abs(delta - 1.0) > 2 * EPS]
            if live.size == 0:
                break
        out[cf] = np.exp(logpref[cf]) * h
    rel = 16.0 * EPS * (np.abs(logpref) + abs(a) + 10.0)
    return out, rel
