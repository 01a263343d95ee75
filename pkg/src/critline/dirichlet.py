"""Dirichlet characters and their L-functions.

Characters are built from a decomposition of (Z/qZ)^x into cyclic
factors; values are exact roots of unity snapped to double precision.
L(s, chi) is evaluated through Hurwitz zeta; the completed Lambda(s, chi),
its functional equation, the real function F(t, chi) and two identity
audits sit on top.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientZerosError, NotPrimitiveError, PoleError, PreconditionError
from .numerics import EPS, EMParams, EvalResult, csum, hurwitz_em, log_gamma
from .zeros import refine_zero, scan_sign_changes
from .zeta import zeta

Q_MAX = 1000


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n: int) -> int:
    r = n
    for p in factorize(n):
        r -= r // p
    return r


def _primitive_root(pk: int, p: int) -> int:
    phi = totient(pk)
    primes = list(factorize(phi))
    for g in range(2, pk):
        if math.gcd(g, pk) == 1 and all(pow(g, phi // r, pk) != 1 for r in primes):
            return g
    raise AssertionError(f"no primitive root modulo {pk}")


def _local_generators(p: int, k: int) -> list[tuple[int, int]]:
    """(generator, order) pairs for the cyclic factors of (Z/p^k)^x."""
    pk = p**k
    if p != 2:
        return [(_primitive_root(pk, p), totient(pk))]
    if k == 1:
        return []
    if k == 2:
        return [(3, 2)]
    return [(pk - 1, 2), (5, pk // 4)]


def _crt_lift(x: int, pk: int, q: int) -> int:
    """The residue mod q that is x mod pk and 1 mod q/pk."""
    m = q // pk
    if m == 1:
        return x % q
    inv = pow(m, -1, pk)
    return (1 + m * ((x - 1) * inv % pk)) % q


@dataclass(frozen=True)
class _UnitGroup:
    q: int
    gens: tuple[int, ...]
    orders: tuple[int, ...]
    dlog: dict  # residue -> exponent tuple


@functools.lru_cache(maxsize=None)
def _unit_group(q: int) -> _UnitGroup:
    gens, orders = [], []
    for p, k in sorted(factorize(q).items()):
        pk = p**k
        for g, o in _local_generators(p, k):
            gens.append(_crt_lift(g, pk, q))
            orders.append(o)
    dlog = {}
    for exps in itertools.product(*(range(o) for o in orders)):
        x = 1
        for g, e in zip(gens, exps):
            x = x * pow(g, e, q) % q
        dlog[x % q] = exps
    if len(dlog) != totient(q):
        raise AssertionError(f"unit group decomposition failed for q = {q}")
    return _UnitGroup(q, tuple(gens), tuple(orders), dlog)


def _root_of_unity(k: int, n: int) -> complex:
    """exp(2 pi i k/n), exact at quarter turns and exactly conjugate-symmetric."""
    k %= n
    if (4 * k) % n == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[4 * k // n]
    if 2 * k > n:
        return _root_of_unity(n - k, n).conjugate()
    return cmath.exp(2j * math.pi * k / n)


@dataclass(frozen=True)
class DirichletCharacter:
    q: int
    values: tuple[complex, ...]
    j: int
    primitive: bool
    a: int
    conductor: int = 1

    def __post_init__(self):
        if len(self.values) != self.q:
            raise PreconditionError("value table length must equal the modulus")

    def __call__(self, n: int) -> complex:
        return self.values[n % self.q]

    @property
    def principal(self) -> bool:
        return self.j == 1

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.values)

    def conjugate(self) -> "DirichletCharacter":
        for c in enumerate_characters(self.q):
            if all(c.values[n] == self.values[n].conjugate() for n in range(self.q)):
                return c
        raise AssertionError("conjugate character missing")


def _is_primitive(q: int, values: Sequence[complex]) -> tuple[bool, int]:
    """Conductor search: the least d | q with chi trivial on units n = 1 mod d."""
    for d in sorted(x for x in range(1, q + 1) if q % x == 0):
        if d == q:
            return True, q
        if all(values[n] == 1 for n in range(1, q, d) if math.gcd(n, q) == 1):
            return False, d
    return True, q


@functools.lru_cache(maxsize=None)
def enumerate_characters(q: int) -> tuple[DirichletCharacter, ...]:
    """All phi(q) characters modulo q; label j is 1 + the mixed-radix index
    of the exponent vector on fixed generators, so j = 1 is principal."""
    if int(q) != q or not 1 <= q <= Q_MAX:
        raise PreconditionError(f"modulus must be an integer in [1, {Q_MAX}], got {q!r}")
    q = int(q)
    if q == 1:
        return (DirichletCharacter(1, (1 + 0j,), 1, True, 0, 1),)
    ug = _unit_group(q)
    n_order = math.lcm(*ug.orders) if ug.orders else 1
    out = []
    for j, cexp in enumerate(itertools.product(*(range(o) for o in ug.orders)), start=1):
        vals = [0j] * q
        for x, e in ug.dlog.items():
            k = sum(c * ei * (n_order // o) for c, ei, o in zip(cexp, e, ug.orders))
            vals[x] = complex(_root_of_unity(k, n_order))
        prim, cond = _is_primitive(q, vals)
        m1 = vals[q - 1]
        a = 0 if m1 == 1 else 1
        out.append(DirichletCharacter(q, tuple(vals), j, prim, a, cond))
    return tuple(out)


def primitive_characters(q: int) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(q) if c.primitive]


def characters_json(q: int) -> list[dict]:
    return [
        {
            "q": c.q,
            "j": c.j,
            "a": c.a,
            "primitive": c.primitive,
            "values": [[v.real, v.imag] for v in c.values],
        }
        for c in enumerate_characters(q)
    ]


# ---------------------------------------------------------------- L-functions


def hurwitz_zeta(s: complex, a: float, params: EMParams | None = None) -> EvalResult:
    s = complex(s)
    if not 0.0 < a <= 1.0:
        raise PreconditionError(f"a must lie in (0, 1], got {a}")
    if abs(s - 1.0) < 1e-12:
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    v, e = hurwitz_em(s, a, params or EMParams.for_point(s))
    return EvalResult(v[0], float(e[0]))


def l_function(s: complex, chi: DirichletCharacter, params: EMParams | None = None) -> EvalResult:
    """q^(-s) sum_a chi(a) zeta(s, a/q).

    For non-principal chi the pole parts of the Hurwitz terms cancel, so
    they are dropped term by term and s = 1 is an ordinary point.
    """
    s = complex(s)
    if chi.q == 1:
        return zeta(s, params)
    if chi.principal and abs(s - 1.0) < 1e-12:
        raise PoleError("L(s, principal character) has a pole at s = 1")
    res = [r for r in range(1, chi.q + 1) if chi(r) != 0]
    w = np.array([chi(r) for r in res])
    if s.real < 0.5:
        # the Euler-Maclaurin tail is poor far left; reflect for primitive chi
        if chi.primitive and not chi.principal:
            return _l_reflected(s, chi, params)
    aa = np.array(res, dtype=float) / chi.q
    v, e = hurwitz_em(s, aa, params or EMParams.for_point(s), regular=not chi.principal)
    qs = cmath.exp(-s * math.log(chi.q))
    val = qs * csum(w * v)
    err = abs(qs) * float(np.sum(e)) + 4 * EPS * abs(qs) * float(np.sum(np.abs(v)))
    return EvalResult(val, err)


def _gamma_ratio(s: complex, a: int) -> tuple[complex, float]:
    """Gamma((1-s+a)/2) / Gamma((s+a)/2) via log-gamma."""
    g1 = log_gamma(0.5 * (1.0 - s + a))
    g2 = log_gamma(0.5 * (s + a))
    return cmath.exp(g1.value - g2.value), g1.abs_err + g2.abs_err


def _l_reflected(s: complex, chi: DirichletCharacter, params: EMParams | None) -> EvalResult:
    # L(s, chi) from L(1 - s, conj chi) through the completed functional equation
    a = chi.a
    half = 0.5 * (s + a)
    k = round(half.real)
    if k <= 0 and abs(half - k) < 1e-14:
        return EvalResult(0j, 0.0)  # trivial zero: 1/Gamma((s+a)/2) vanishes
    tau = gauss_sum(chi).value
    lhs = l_function(1.0 - s, chi.conjugate(), params)
    ratio, rel = _gamma_ratio(s, a)
    fac = cmath.exp((0.5 - s) * math.log(chi.q / math.pi)) * ratio * tau / ((1j**a) * math.sqrt(chi.q))
    val = fac * lhs.value
    return EvalResult(val, abs(fac) * lhs.abs_err + abs(val) * (rel + 8 * EPS * (abs(s) + 1)))


@dataclass(frozen=True)
class GaussSumPolar:
    magnitude: float
    theta: float
    theta_prime: float
    value: complex


def _wrap(x: float) -> float:
    """Reduce to (-pi, pi]."""
    y = math.remainder(x, 2 * math.pi)
    return math.pi if y == -math.pi else y


def gauss_sum(chi: DirichletCharacter) -> GaussSumPolar:
    q = chi.q
    terms = [chi(n) * _root_of_unity(n, q) for n in range(1, q + 1)]
    tau = csum(terms)
    theta = cmath.phase(tau)
    # i^a e^{-i theta} = e^{-i theta'}
    theta_p = _wrap(theta - chi.a * math.pi / 2)
    return GaussSumPolar(abs(tau), theta, theta_p, tau)


def lambda_completed(s: complex, chi: DirichletCharacter) -> EvalResult:
    """(q/pi)^((s+a)/2) Gamma((s+a)/2) L(s, chi)."""
    s = complex(s)
    if chi.principal and chi.q > 1:
        raise PreconditionError("completed L-function defined here for non-principal characters")
    a = chi.a
    half = 0.5 * (s + a)
    lg = log_gamma(half)
    fac = cmath.exp(half * math.log(chi.q / math.pi) + lg.value)
    L = l_function(s, chi)
    val = fac * L.value
    return EvalResult(val, abs(fac) * L.abs_err + abs(val) * (lg.abs_err + 8 * EPS * (abs(s) + 1)))


def _require_primitive(chi: DirichletCharacter) -> None:
    if not chi.primitive:
        raise NotPrimitiveError(f"character q={chi.q}, j={chi.j} is not primitive (conductor {chi.conductor})")


def _lambda_direct(s: complex, chi: DirichletCharacter) -> complex:
    # both sides of the functional-equation check use the Hurwitz series
    a = chi.a
    half = 0.5 * (s + a)
    lg = log_gamma(half)
    res = [r for r in range(1, chi.q + 1) if chi(r) != 0]
    w = np.array([chi(r) for r in res])
    v, _ = hurwitz_em(s, np.array(res, dtype=float) / chi.q, EMParams.for_point(s), regular=not chi.principal)
    L = cmath.exp(-s * math.log(chi.q)) * csum(w * v) if chi.q > 1 else v[0]
    return cmath.exp(half * math.log(chi.q / math.pi) + lg.value) * L


def functional_residual_L(s: complex, chi: DirichletCharacter) -> float:
    """|Lambda(1-s, conj chi) - i^a sqrt(q)/tau(chi) Lambda(s, chi)| relative,
    both sides from the direct Hurwitz series (no reflection)."""
    _require_primitive(chi)
    s = complex(s)
    lhs = _lambda_direct(1.0 - s, chi.conjugate())
    tau = gauss_sum(chi).value
    rhs = (1j**chi.a) * math.sqrt(chi.q) / tau * _lambda_direct(s, chi)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def f_real_chi(t: float, chi: DirichletCharacter) -> EvalResult:
    """Lambda(1/2 + it, chi) e^{-i theta'/2}: real for primitive chi."""
    _require_primitive(chi)
    gs = gauss_sum(chi)
    lam = lambda_completed(complex(0.5, float(t)), chi)
    rot = cmath.exp(-0.5j * gs.theta_prime)
    return EvalResult(lam.value * rot, lam.abs_err)


def _scaled_f_chi(chi: DirichletCharacter):
    # F(t, chi) without the exp(-pi|t|/4) gamma decay; same sign
    gs = gauss_sum(chi)
    a = chi.a
    lq = math.log(chi.q / math.pi)

    def f(t: float) -> EvalResult:
        s = complex(0.5, t)
        half = 0.5 * (s + a)
        lg = log_gamma(half)
        L = l_function(s, chi)
        ph = cmath.exp(1j * (half.imag * lq + lg.value.imag - 0.5 * gs.theta_prime))
        val = L.value * ph
        return EvalResult(val.real, L.abs_err + abs(L.value) * (lg.abs_err + 1e-15 * abs(t)))

    return f


def l_zero_ordinates(chi: DirichletCharacter, n_zeros: int, tol: float = 1e-10, step: float = 0.05, t_max: float = 200.0) -> list[float]:
    """Critical-line zero ordinates of L(s, chi), ordered by |gamma|.

    For real chi only positive ordinates are returned (each stands for
    the conjugate pair); for complex chi both half-lines are scanned.
    """
    _require_primitive(chi)
    if n_zeros == 0:
        return []
    f = _scaled_f_chi(chi)
    found: list[float] = []
    lo = 0.0
    span = 20.0
    while lo < t_max:
        hi = min(lo + span, t_max)
        brs = list(scan_sign_changes(lo, hi, step, f))
        if not chi.is_real:
            brs += scan_sign_changes(-hi, -lo, step, f)
        for b in brs:
            found.append(refine_zero(b, tol, f).t)
        found = sorted(set(found), key=abs)
        if len(found) >= n_zeros and lo > 0 and abs(found[n_zeros - 1]) <= hi:
            return found[:n_zeros]
        lo = hi
    if len(found) >= n_zeros:
        return found[:n_zeros]
    raise InsufficientZerosError(f"found {len(found)} of {n_zeros} zeros below |t| = {t_max}")


def log_derivative_lambda_at_zero(chi: DirichletCharacter, h: float = 1e-5) -> tuple[complex, complex]:
    """Lambda'/Lambda at s = 0 by central differences of log Lambda with one
    Richardson step.  Lambda(0) itself is never evaluated (for even chi
    it is a Gamma pole times an L-zero).  Returns (value, |Lambda(0)| estimate)."""

    def dlog(hh: float) -> tuple[complex, complex]:
        up = lambda_completed(complex(hh), chi).value
        dn = lambda_completed(complex(-hh), chi).value
        return cmath.log(up / dn) / (2 * hh), 0.5 * (up + dn)

    d1, m1 = dlog(h)
    d2, _ = dlog(0.5 * h)
    return (4 * d2 - d1) / 3, m1


def b_chi_audit(chi: DirichletCharacter, n_zeros: int, zeros: Sequence[float] | None = None) -> dict:
    """Compare Lambda'/Lambda(0, chi) with -1/2 sum (1/(1-rho) + 1/rho) over zeros.

    Zeros are rho = 1/2 + i gamma with gamma from a sign scan of F(t, chi).
    For real chi each positive gamma stands for rho and conj(rho).  The
    reconstruction is real by construction, so for complex chi the gap
    keeps the imaginary part of the finite-difference value.
    """
    _require_primitive(chi)
    if chi.principal:
        raise PreconditionError("b_chi_audit needs a non-principal primitive character")
    if int(n_zeros) != n_zeros or n_zeros < 0:
        raise PreconditionError(f"n_zeros must be a non-negative integer, got {n_zeros!r}")
    b_fd, lam0 = log_derivative_lambda_at_zero(chi)
    if abs(lam0) < 1e-12:
        raise PreconditionError("Lambda(0, chi) vanishes numerically; the log-derivative is undefined")
    gammas = list(zeros[:n_zeros]) if zeros is not None else l_zero_ordinates(chi, n_zeros)
    if len(gammas) < n_zeros:
        raise InsufficientZerosError(f"{len(gammas)} zeros supplied, {n_zeros} requested")
    rhos = []
    for g in gammas:
        rhos.append(complex(0.5, g))
        if chi.is_real:
            rhos.append(complex(0.5, -g))
    terms = [-0.5 * (1.0 / (1.0 - r) + 1.0 / r) for r in rhos]
    recon = csum(terms) if terms else 0j
    return {
        "q": chi.q,
        "j": chi.j,
        "n_zeros": n_zeros,
        "b_fd": b_fd,
        "b_zeros": recon,
        "gap": abs(b_fd - recon),
        "gap_real": abs(b_fd.real - recon.real),
        "last_ordinate": abs(gammas[-1]) if gammas else 0.0,
    }


# ------------------------------------------------------- principal identity


def prime_divisors(q: int) -> list[int]:
    return sorted(factorize(q))


def euler_factor_form(s: complex, q: int) -> EvalResult:
    """zeta(s) prod_{p | q} (1 - p^(-s))."""
    s = complex(s)
    z = zeta(s)
    fac = 1.0 + 0j
    for p in prime_divisors(q):
        fac *= 1.0 - cmath.exp(-s * math.log(p))
    return EvalResult(z.value * fac, abs(fac) * z.abs_err + 4 * EPS * abs(z.value * fac))


def printed_closed_form(s: complex, q: int, primes: Sequence[int]) -> complex:
    """q^(-s) [q^s + |P| - 1 - sum_{p in P} p^s] zeta(s) for a prime set P."""
    s = complex(s)
    qs = cmath.exp(s * math.log(q))
    bracket = qs + len(primes) - 1 - sum(cmath.exp(s * math.log(p)) for p in primes)
    return bracket / qs * zeta(s).value


def principal_identity_audit(s: complex, q: int, finding_tol: float = 1e-9) -> dict:
    """L(s, principal) three ways: the Hurwitz evaluator, the Euler-factor
    form, and the bracketed closed form.

    The closed form is evaluated under two readings of its prime set:
    prime divisors p < q (the primes arising as gcd(q - P, q) for
    0 < P < q) and all prime divisors of q.
    """
    s = complex(s)
    if int(q) != q or not 2 <= q <= Q_MAX:
        raise PreconditionError(f"q must be an integer in [2, {Q_MAX}], got {q!r}")
    if abs(s - 1.0) < 1e-12:
        raise PoleError("L(s, principal character) has a pole at s = 1")
    chi1 = enumerate_characters(q)[0]
    i_val = l_function(s, chi1)
    ii_val = euler_factor_form(s, q)
    pd = prime_divisors(q)
    iii = printed_closed_form(s, q, [p for p in pd if p < q])
    iii_all = printed_closed_form(s, q, pd)
    scale = max(abs(i_val.value), 1e-300)
    r2 = abs(i_val.value - ii_val.value) / scale
    r3 = abs(i_val.value - iii) / scale
    r3_all = abs(i_val.value - iii_all) / scale
    return {
        "q": q,
        "s": s,
        "l_hurwitz": i_val.value,
        "l_euler": ii_val.value,
        "l_printed": iii,
        "l_printed_all_primes": iii_all,
        "residual_euler": r2,
        "residual_printed": r3,
        "residual_printed_all_primes": r3_all,
        "finding": r3 > finding_tol,
        "finding_all_primes": r3_all > finding_tol,
    }
