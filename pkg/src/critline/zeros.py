"""Critical-line zeros as sign changes of the real function F(t)."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import NoSignChangeError, PreconditionError, ScanExhaustedError
from .numerics import EvalResult, log_gamma
from .zeta import LOG_PI, ZeroList, zeta

DEFAULT_STEP = 0.05
MAX_COUNT = 500

RealFunction = Callable[[float], EvalResult]


class Bracket(NamedTuple):
    lo: float
    hi: float
    widened: bool = False


@dataclass(frozen=True)
class ZeroRecord:
    index: int
    t: float
    bracket: tuple[float, float]
    tol: float

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo < self.t < hi:
            raise PreconditionError(f"ordinate {self.t} outside its bracket ({lo}, {hi})")
        if hi - lo > 2 * self.tol:
            raise PreconditionError(f"bracket width {hi - lo} exceeds 2*tol = {2 * self.tol}")


def scaled_f(t: float) -> EvalResult:
    """F(t) divided by the positive factor exp(Re log Gamma(1/4 + it/2)) pi^(-1/4).

    The result has the sign of F(t) but no exp(-pi t/4) decay, so signs
    stay reliable far up the line.
    """
    t = float(t)
    s = complex(0.5, t)
    lg = log_gamma(0.25 + 0.5j * t)
    theta = lg.value.imag - 0.5 * t * LOG_PI
    z = zeta(s)
    val = (cmath.exp(1j * theta) * z.value).real
    return EvalResult(val, z.abs_err + abs(z.value) * (lg.abs_err + 1e-15 * abs(t)))


def _sign(ev: EvalResult) -> int:
    if abs(ev.real) <= ev.abs_err:
        return 0
    return 1 if ev.real > 0 else -1


def scan_sign_changes(
    t_lo: float,
    t_hi: float,
    step: float = DEFAULT_STEP,
    func: RealFunction = scaled_f,
    workers: int = 1,
) -> list[Bracket]:
    """Brackets (a, a + step) across which ``func`` changes sign.

    Samples whose magnitude is below their error estimate are
    indeterminate; a sign change across them yields a bracket spanning
    the indeterminate samples, flagged ``widened``.
    """
    if step <= 0:
        raise PreconditionError(f"step must be positive, got {step}")
    if not t_lo < t_hi:
        raise PreconditionError(f"empty scan interval [{t_lo}, {t_hi}]")
    n = math.ceil((t_hi - t_lo) / step - 1e-9)
    ts = [t_lo + k * step for k in range(n)] + [t_hi]
    if workers == 1:
        signs = [_sign(func(t)) for t in ts]
    else:
        with ThreadPoolExecutor(max_workers=workers or None) as ex:
            signs = [_sign(ev) for ev in ex.map(func, ts)]

    out = []
    prev = None
    for i, sg in enumerate(signs):
        if sg == 0:
            continue
        if prev is not None and signs[prev] != sg:
            out.append(Bracket(ts[prev], ts[i], i - prev > 1))
        prev = i
    return out


def refine_zero(
    bracket,
    tol: float,
    func: RealFunction = scaled_f,
    index: int = 1,
) -> ZeroRecord:
    """Shrink a sign-change bracket to width <= 2*tol.

    Regula falsi steps, pushed at least tol/2 off the bracket ends, with a
    bisection fallback whenever a step fails to halve the bracket.  The
    reported ordinate is the final secant point, strictly inside.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol}")
    if not lo < hi:
        raise PreconditionError(f"bad bracket ({lo}, {hi})")
    flo, fhi = func(lo).real, func(hi).real
    if not flo * fhi < 0:
        raise NoSignChangeError(f"no sign change across ({lo}, {hi})")

    while hi - lo > 2 * tol:
        width = hi - lo
        guard = 0.5 * tol
        x = lo - flo * width / (fhi - flo)
        x = min(max(x, lo + guard), hi - guard)
        fx = func(x).real
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        if hi - lo > 0.5 * width:
            m = 0.5 * (lo + hi)
            fm = func(m).real
            if (fm < 0) == (flo < 0):
                lo, flo = m, fm
            else:
                hi, fhi = m, fm

    t = lo - flo * (hi - lo) / (fhi - flo)
    if not lo < t < hi:
        t = 0.5 * (lo + hi)
    return ZeroRecord(index, t, (lo, hi), tol)


def expected_zero_count(T: float) -> float:
    """Smooth Riemann-von Mangoldt count of ordinates in (0, T]."""
    if T <= 2 * math.pi:
        return 0.0
    x = T / (2 * math.pi)
    return x * math.log(x) - x + 7.0 / 8.0


def build_zero_list(
    count: int,
    tol: float = 1e-10,
    step: float = DEFAULT_STEP,
    path=None,
    workers: int = 1,
    t_max: float = 1000.0,
) -> ZeroList:
    """The first ``count`` ordinates, each refined to ``tol``.

    The scan window starts where the smooth zero count exceeds ``count``
    and grows by 1.5x until enough sign changes are seen.  Samples sit on
    the global grid k*step so extensions never shift earlier samples.
    """
    if int(count) != count or count < 1:
        raise PreconditionError(f"count must be a positive integer, got {count!r}")
    if count > MAX_COUNT:
        raise PreconditionError(f"count {count} exceeds the supported {MAX_COUNT}")
    T = 20.0
    while expected_zero_count(T) < count + 2:
        T *= 1.1
    brackets: list[Bracket] = []
    start = 0.0
    while True:
        stop = min(step * math.ceil(T / step), t_max)
        if stop > start:
            new = scan_sign_changes(start, stop, step, workers=workers)
            # a bracket ending exactly on the old boundary was already found
            brackets.extend(b for b in new if not (brackets and b.hi <= brackets[-1].hi))
            start = stop
        if len(brackets) >= count:
            break
        if stop >= t_max:
            raise ScanExhaustedError(f"found {len(brackets)} of {count} zeros below t = {t_max}")
        T *= 1.5
    records = [refine_zero(b, tol, index=i) for i, b in enumerate(brackets[:count], start=1)]
    zl = ZeroList(tuple(r.t for r in records), "computed", tuple(r.tol for r in records))
    if path is not None:
        zl.write(path)
    return zl
