"""Phase-sum audit for hypothetical off-line zero quadruples.

A zero at sigma + i tau off the critical line forces three companions,
1 - sigma - i tau, sigma - i tau and 1 - sigma + i tau.  This module
evaluates the closed-form arctangent phase term claimed for such a
quadruple, in two variants (the literal ``3t^3`` and a ``3t^2``
reading), next to the argument of the product of the four factors
(1 - s/rho) at s = 1/2 + it computed directly.  It also evaluates the
two denominator polynomials D(sigma, tau) and z(sigma, tau, t) with
analytic gradients and finite-difference cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DenominatorZeroError, PreconditionError

VARIANTS = ("as-printed", "t-squared")
DEN_REL_TOL = 1e-14
FD_STEP = 1e-5

LEDGER_COLUMNS = ("t", "sigma", "tau", "variant", "paper_term", "direct_arg", "residual_mod_pi")


@dataclass(frozen=True)
class QuadrupleHypothesis:
    sigma: float
    tau: float
    alpha: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.sigma < 0.5:
            raise PreconditionError(f"sigma must lie in (0, 1/2), got {self.sigma}")
        if not self.tau > 0.0:
            raise PreconditionError(f"tau must be positive, got {self.tau}")
        object.__setattr__(self, "alpha", (0.5 - self.sigma) ** 2)

    @property
    def zeros(self) -> tuple[complex, complex, complex, complex]:
        s, t = self.sigma, self.tau
        return (complex(s, t), complex(1 - s, -t), complex(s, -t), complex(1 - s, t))

    @property
    def t0(self) -> float:
        """The ordinate where the phase-term numerator vanishes: t^2 = tau^2 + alpha."""
        return math.sqrt(self.tau * self.tau + self.alpha)


def _exponent(variant: str) -> int:
    if variant == "as-printed":
        return 3
    if variant == "t-squared":
        return 2
    raise PreconditionError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def quadruple_factor_product(t: float, h: QuadrupleHypothesis) -> complex:
    s = complex(0.5, float(t))
    out = 1.0 + 0j
    for rho in h.zeros:
        out *= 1.0 - s / rho
    return out


def factor_arguments(t: float, h: QuadrupleHypothesis) -> list[float]:
    s = complex(0.5, float(t))
    return [cmath.phase(1.0 - s / rho) for rho in h.zeros]


def direct_arg(t: float, h: QuadrupleHypothesis) -> float:
    return cmath.phase(quadruple_factor_product(t, h))


def _phase_parts(t, sigma, tau, k: int):
    t2 = t * t
    tt = t2 + tau * tau
    alpha = (0.5 - sigma) ** 2
    num = 2.0 * t * (1.0 - 2.0 * sigma) * (t2 - tau * tau - alpha)
    den = tt * tt + alpha * (alpha - 3.0 * t**k - tau * tau)
    return num, den, tt * tt


def paper_phase_term(t: float, h: QuadrupleHypothesis, variant: str = "as-printed") -> float:
    """Single-argument arctangent of the closed-form phase quotient (principal value)."""
    k = _exponent(variant)
    num, den, scale = _phase_parts(float(t), h.sigma, h.tau, k)
    if abs(den) < DEN_REL_TOL * scale or den == 0.0:
        raise DenominatorZeroError(f"phase denominator vanishes at t={t}, sigma={h.sigma}, tau={h.tau} ({variant})")
    return math.atan(num / den)


def phase_sum(t: float, hs: Sequence[QuadrupleHypothesis], variant: str = "as-printed") -> float:
    return math.fsum(paper_phase_term(t, h, variant) for h in hs)


def phase_sum_direct(t: float, hs: Sequence[QuadrupleHypothesis]) -> float:
    """Argument of the full product over all quadruples (the audit companion)."""
    acc = 1.0 + 0j
    for h in hs:
        acc *= quadruple_factor_product(t, h)
    return cmath.phase(acc)


def residual_mod_pi(a: float, b: float) -> float:
    return min(abs(a - b - k * math.pi) for k in range(-2, 3))


def phase_ledger(ts: Iterable[float], hs: Iterable[QuadrupleHypothesis]) -> list[dict]:
    """One row per (t, hypothesis, variant); a vanishing denominator leaves the term as nan."""
    ts = list(ts)
    rows = []
    for h in hs:
        for t in ts:
            d = direct_arg(t, h)
            for variant in VARIANTS:
                try:
                    term = paper_phase_term(t, h, variant)
                    res = residual_mod_pi(term, d)
                except DenominatorZeroError:
                    term = res = math.nan
                rows.append(
                    {
                        "t": float(t),
                        "sigma": h.sigma,
                        "tau": h.tau,
                        "variant": variant,
                        "paper_term": term,
                        "direct_arg": d,
                        "residual_mod_pi": res,
                    }
                )
    return rows


def default_hypotheses(n_sigma: int = 20, n_tau: int = 20, tau_max: float = 40.0) -> list[QuadrupleHypothesis]:
    sig = np.linspace(0.0, 0.5, n_sigma + 2)[1:-1]
    tau = np.linspace(tau_max / n_tau, tau_max, n_tau)
    return [QuadrupleHypothesis(float(s), float(t)) for s in sig for t in tau]


def default_t_samples(n: int = 20, t_max: float = 30.0) -> list[float]:
    return [float(x) for x in np.linspace(0.0, t_max, n)]


def phase_audit(
    hs: Sequence[QuadrupleHypothesis] | None = None,
    ts: Sequence[float] | None = None,
    match_tol: float = 1e-9,
) -> tuple[list[dict], dict]:
    """Ledger plus summary: t = 0 and t = t0 checks, per-variant agreement counts."""
    hs = default_hypotheses() if hs is None else list(hs)
    ts = default_t_samples() if ts is None else list(ts)
    rows = phase_ledger(ts, hs)
    summary: dict = {"cells": len(hs), "t_samples": len(ts), "rows": len(rows)}
    for variant in VARIANTS:
        vr = [r for r in rows if r["variant"] == variant]
        finite = [r["residual_mod_pi"] for r in vr if not math.isnan(r["residual_mod_pi"])]
        t_zero = [abs(r["paper_term"]) for r in vr if r["t"] == 0.0]
        at_t0 = []
        for h in hs:
            try:
                at_t0.append(abs(paper_phase_term(h.t0, h, variant)))
            except DenominatorZeroError:
                at_t0.append(math.nan)
        summary[variant] = {
            "max_abs_term_t0": max(at_t0) if at_t0 else 0.0,
            "max_abs_term_at_zero": max(t_zero) if t_zero else 0.0,
            "denominator_zero_rows": len(vr) - len(finite),
            "matching_rows": sum(1 for x in finite if x <= match_tol),
            "max_residual_mod_pi": max(finite) if finite else math.nan,
        }
    summary["max_abs_direct_arg"] = max((abs(r["direct_arg"]) for r in rows), default=0.0)
    return rows, summary


# ------------------------------------------------------------ denominators


def d_denominator(sigma, tau):
    s2, t2 = sigma * sigma, tau * tau
    return s2 * s2 + s2 * (1 - 2 * sigma + 2 * t2) + t2 * (1 - 2 * sigma) + t2 * t2


def d_gradient(sigma, tau):
    """(dD/dsigma, dD/dtau)."""
    s2, t2 = sigma * sigma, tau * tau
    ds = 4 * s2 * sigma + 2 * sigma * (1 - 2 * sigma + 2 * t2) - 2 * s2 - 2 * t2
    dt = 4 * s2 * tau + 2 * tau * (1 - 2 * sigma) + 4 * t2 * tau
    return ds, dt


def z_denominator(sigma, tau, t, variant: str = "as-printed"):
    k = _exponent(variant)
    alpha = (0.5 - sigma) ** 2
    tt = t * t + tau * tau
    return tt * tt + alpha * (alpha - 3 * t**k - tau * tau)


def z_gradient(sigma, tau, t, variant: str = "as-printed"):
    """(dz/dsigma, dz/dtau, dz/dt)."""
    k = _exponent(variant)
    alpha = (0.5 - sigma) ** 2
    tt = t * t + tau * tau
    dsig = (2 * sigma - 1) * (2 * alpha - 3 * t**k - tau * tau)
    dtau = 4 * tau * tt - 2 * alpha * tau
    dt = 4 * t * tt - 3 * k * alpha * t ** (k - 1)
    return dsig, dtau, dt


def _fd(f, args, i, h):
    up = list(args)
    dn = list(args)
    up[i] = up[i] + h
    dn[i] = dn[i] - h
    return (f(*up) - f(*dn)) / (2 * h)


@dataclass
class ScanReport:
    function: str
    points: int
    min_grad_norm: float
    min_grad_at: tuple
    min_abs_value: float
    min_abs_at: tuple
    max_fd_rel_err: float
    max_fd_rel_err_at: tuple


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


DEFAULT_SIGMA = (0.005, 0.995, 0.01)
DEFAULT_TAU = (0.1, 50.0, 0.1)
DEFAULT_T = (0.1, 50.0, 0.1)


def critical_point_scan(
    f: str,
    sigma_grid=DEFAULT_SIGMA,
    tau_grid=DEFAULT_TAU,
    t_grid=DEFAULT_T,
    variant: str = "as-printed",
    step: float = FD_STEP,
) -> ScanReport:
    """Grid scan of |grad f| (central differences) and |f| for f in {"D", "z"}.

    Each grid is ``(lo, hi, step)``.  Also records the worst norm-wise
    relative gap between finite-difference and analytic gradients.
    The z grid is processed one t-slice at a time to bound memory.
    """
    sig = _grid(*sigma_grid)
    tau = _grid(*tau_grid)
    S, T = np.meshgrid(sig, tau, indexing="ij")
    best = {"g": (math.inf, None), "v": (math.inf, None), "e": (-1.0, None)}

    def update(fd, an, val, coords):
        gn = np.sqrt(sum(g * g for g in fd))
        an_n = np.sqrt(sum(g * g for g in an))
        diff = np.sqrt(sum((a - b) ** 2 for a, b in zip(fd, an)))
        rel = diff / np.where(an_n > 0, an_n, 1.0)
        av = np.abs(val)
        for key, arr, better in (("g", gn, np.argmin), ("v", av, np.argmin), ("e", rel, np.argmax)):
            i = better(arr)
            x = float(arr.flat[i])
            cur = best[key][0]
            if (key == "e" and x > cur) or (key != "e" and x < cur):
                best[key] = (x, tuple(float(c.flat[i]) for c in coords))

    if f == "D":
        fd = [_fd(d_denominator, (S, T), i, step) for i in range(2)]
        update(fd, d_gradient(S, T), d_denominator(S, T), (S, T))
        n = S.size
    elif f == "z":
        zf = lambda a, b, c: z_denominator(a, b, c, variant)  # noqa: E731
        ts = _grid(*t_grid)
        for tv in ts:
            Tt = np.full_like(S, tv)
            fd = [_fd(zf, (S, T, Tt), i, step) for i in range(3)]
            update(fd, z_gradient(S, T, Tt, variant), zf(S, T, Tt), (S, T, Tt))
        n = S.size * ts.size
    else:
        raise PreconditionError(f"unknown function {f!r}; expected 'D' or 'z'")
    return ScanReport(f, n, best["g"][0], best["g"][1], best["v"][0], best["v"][1], best["e"][0], best["e"][1])
