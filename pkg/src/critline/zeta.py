"""Riemann zeta, the completed function Phi, the real function F(t), and
truncated Hadamard-product reconstructions over critical-line zeros."""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InsufficientZerosError, PoleError, PreconditionError
from .numerics import (
    EPS,
    EMParams,
    EvalResult,
    _gamma_rel_err,
    _log_sin_pi,
    check_gamma_pole,
    hurwitz_em,
    log_gamma,
)

LOG_PI = math.log(math.pi)
LOG_2 = math.log(2.0)


@dataclass(frozen=True)
class CriticalStripPoint:
    sigma: float
    t: float

    def __post_init__(self):
        if not 0.0 < self.sigma < 1.0:
            raise PreconditionError(f"sigma must lie in (0, 1), got {self.sigma}")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class ZeroList:
    """Strictly increasing critical-line zero ordinates.

    Each ordinate tau stands for the pair of zeros 1/2 +- i tau.
    """

    ordinates: tuple[float, ...]
    source: str = "computed"
    tolerances: tuple[float, ...] = field(default=())

    def __post_init__(self):
        ords = tuple(float(x) for x in self.ordinates)
        object.__setattr__(self, "ordinates", ords)
        if self.source not in ("computed", "loaded"):
            raise PreconditionError(f"unknown source tag {self.source!r}")
        tols = tuple(float(x) for x in self.tolerances) or (0.0,) * len(ords)
        if len(tols) != len(ords):
            raise PreconditionError("tolerances must match ordinates in length")
        object.__setattr__(self, "tolerances", tols)
        for i, x in enumerate(ords):
            if not x > 1.0:
                raise PreconditionError(f"ordinate #{i + 1} = {x} is not > 1")
            if i and not x > ords[i - 1]:
                raise PreconditionError(f"ordinates not strictly increasing at #{i + 1}")

    def __len__(self) -> int:
        return len(self.ordinates)

    def __getitem__(self, i):
        return self.ordinates[i]

    def to_text(self) -> str:
        return "".join(
            f"{i}\t{x:.17g}\t{tol:.17g}\n"
            for i, (x, tol) in enumerate(zip(self.ordinates, self.tolerances), start=1)
        )

    def write(self, path: str | os.PathLike) -> None:
        from .reports import atomic_write_text

        atomic_write_text(path, self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "ZeroList":
        ords, tols = [], []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise PreconditionError(f"line {lineno}: expected 3 tab-separated fields")
            idx, x, tol = int(parts[0]), float(parts[1]), float(parts[2])
            if idx != len(ords) + 1:
                raise PreconditionError(f"line {lineno}: index {idx} out of sequence")
            ords.append(x)
            tols.append(tol)
        return cls(tuple(ords), "loaded", tuple(tols))

    @classmethod
    def read(cls, path: str | os.PathLike) -> "ZeroList":
        with open(path, encoding="ascii") as fh:
            return cls.from_text(fh.read())


def zeta_direct(s: complex, params: EMParams | None = None) -> EvalResult:
    """Euler-Maclaurin evaluation without any reflection."""
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta has a pole at s = 1")
    v, e = hurwitz_em(s, 1.0, params or EMParams.for_point(s))
    return EvalResult(v[0], float(e[0]))


def reflection_factor(s: complex) -> tuple[complex, float]:
    """2^s pi^(s-1) sin(pi s/2) Gamma(1-s) and its relative error estimate."""
    s = complex(s)
    lg = log_gamma(1.0 - s)
    log_mag = s * LOG_2 + (s - 1.0) * LOG_PI + lg.value
    if abs(s.imag) < 20.0:
        val = cmath.exp(log_mag) * cmath.sin(0.5 * math.pi * s)
    else:
        val = cmath.exp(log_mag + _log_sin_pi(0.5 * s))
    return val, _gamma_rel_err(1.0 - s) + 8 * EPS * (abs(s) + 1.0)


def zeta(s: complex, params: EMParams | None = None) -> EvalResult:
    """Riemann zeta on the whole plane minus s = 1.

    Re(s) >= 1/2 (and a small disc around s = 0, where the reflected form
    is 0 * pole) uses Euler-Maclaurin directly; the rest goes through the
    functional equation applied to zeta(1 - s).
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta has a pole at s = 1")
    if s.real >= 0.5 or abs(s) < 0.1:
        return zeta_direct(s, params)
    fac, rel = reflection_factor(s)
    z1 = zeta_direct(1.0 - s, params)
    val = fac * z1.value
    return EvalResult(val, abs(fac) * z1.abs_err + abs(val) * rel)


def functional_equation_residual(s: complex) -> float:
    """|LHS - RHS| / max(|LHS|, 1) with both sides from the direct series.

    At integers s >= 2 the right side is a Gamma pole times a zero of
    sin or zeta; those points raise PoleError rather than take a limit.
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-12 or abs(s) < 1e-12:
        raise PoleError("functional equation residual undefined at s = 0, 1")
    lhs = zeta_direct(s).value
    fac, _ = reflection_factor(s)
    rhs = fac * zeta_direct(1.0 - s).value
    return abs(lhs - rhs) / max(abs(lhs), 1.0)


def phi(s: complex) -> EvalResult:
    """Gamma(s/2) pi^(-s/2) zeta(s), symmetric under s -> 1 - s."""
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("Phi has a pole at s = 1")
    check_gamma_pole(0.5 * s)
    lg = log_gamma(0.5 * s)
    fac = cmath.exp(lg.value - 0.5 * s * LOG_PI)
    z = zeta(s)
    val = fac * z.value
    err = abs(fac) * z.abs_err + abs(val) * (lg.abs_err + 4 * EPS * abs(s))
    return EvalResult(val, err)


def big_f(t: float) -> EvalResult:
    """F(t) = Phi(1/2 + i t); real in exact arithmetic."""
    return phi(complex(0.5, float(t)))


def realness(ev: EvalResult, floor: float = 1e-10) -> bool:
    """The imaginary part is within the evaluation noise of a real number."""
    return abs(ev.imag) <= max(ev.abs_err, floor * abs(ev.value))


def _hadamard_tail(w: complex, tmax: float) -> float:
    # sum over ordinates > tmax of 1/tau^2, zero density log(tau/2pi)/2pi
    return abs(w) * (math.log(max(tmax, 2 * math.pi * math.e) / (2 * math.pi)) + 1.0) / (2 * math.pi * tmax)


def _check_pairs(zeros: ZeroList | Sequence[float], n_pairs: int) -> np.ndarray:
    if int(n_pairs) != n_pairs or n_pairs < 1:
        raise PreconditionError(f"n_pairs must be a positive integer, got {n_pairs!r}")
    if n_pairs > len(zeros):
        raise InsufficientZerosError(f"n_pairs = {n_pairs} exceeds the {len(zeros)} available ordinates")
    return np.asarray(zeros[:n_pairs], dtype=float)


def hadamard_zeta(s: complex, zeros: ZeroList, n_pairs: int) -> EvalResult:
    """zeta(s) from the product over the first ``n_pairs`` zero pairs.

    Each ordinate tau contributes (1 - s/rho)(1 - s/conj(rho)) for
    rho = 1/2 + i tau, i.e. the real-coefficient factor
    (1/4 + tau^2 - s(1 - s)) / (1/4 + tau^2).  ``abs_err`` carries a
    zero-density estimate of the truncation, which dominates.
    """
    s = complex(s)
    taus = _check_pairs(zeros, n_pairs)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta has a pole at s = 1")
    w = s * (1.0 - s)
    m = 0.25 + taus * taus
    prod = complex(np.prod((m - w) / m))
    half = 1.0 + 0.5 * s
    k = round(half.real)
    if k <= 0 and abs(half - k) < 1e-14:
        pref = 0j  # 1/Gamma vanishes at its poles
        rel = 0.0
    else:
        lg = log_gamma(half)
        pref = cmath.exp(0.5 * s * LOG_PI - lg.value) / (2.0 * (s - 1.0))
        rel = lg.abs_err
    val = pref * prod
    err = abs(val) * (_hadamard_tail(w, float(taus[-1])) + rel + 4 * EPS * n_pairs)
    return EvalResult(val, err)


def b_product(t: float, zeros: ZeroList, n_pairs: int) -> EvalResult:
    """Truncated B(t) = prod_rho (1 - (1/2 + i t)/rho), paired, complex arithmetic."""
    taus = _check_pairs(zeros, n_pairs)
    s = complex(0.5, float(t))
    acc = 1.0 + 0j
    for tau in taus:
        rho = complex(0.5, tau)
        acc *= (1.0 - s / rho) * (1.0 - s / rho.conjugate())
    w = 0.25 + float(t) ** 2
    err = abs(acc) * (_hadamard_tail(w, float(taus[-1])) + 8 * EPS * n_pairs)
    return EvalResult(acc, err)


def b_product_closed_form(t: float, zeros: ZeroList, n_pairs: int) -> float:
    """The same truncation written as prod (tau^2 - t^2) / (1/4 + tau^2)."""
    taus = _check_pairs(zeros, n_pairs)
    t = float(t)
    return float(np.prod((taus * taus - t * t) / (0.25 + taus * taus)))
