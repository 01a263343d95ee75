"""Epstein zeta functions of positive-definite binary quadratic forms.

Z(s) = sum over (n, m) != (0, 0) of (a n^2 + b n m + c m^2)^(-s).

The continuation uses the theta split

    (sqrt(D)/2pi)^s Gamma(s) Z(s)
        = dbar^(1-s)/(s-1) - dbar^(-s)/s
          + sum_v [ k^(-s) Gamma(s, k d) + k^(s-1) Gamma(1-s, k dbar) ],

with k = 2 pi Q(v)/sqrt(D) and d = exp(i phi).  At phi = 0 this is the
textbook split at x = 1.  For large |t| the individual terms are
exp(pi|t|/2) times larger than their sum, so the split is taken along
a ray tilted towards the imaginary axis, which cuts that cancellation
down to a factor exp(2)|t|/2 at the cost of more lattice terms.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundaryTooCoarseError,
    ConvergenceRegionError,
    PoleError,
    PreconditionError,
)
from .numerics import EPS, EvalResult, _near_gamma_pole, csum, log_gamma, upper_gamma

ROTATION_SLACK = 2.0  # (pi/2 - phi)|t| once rotation kicks in
TAIL_DECAY = 40.0  # Re(k d) cut-off for the incomplete-gamma terms


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if int(v) != v:
                raise PreconditionError(f"coefficient {name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.a <= 0 or self.delta <= 0:
            raise PreconditionError(f"form {self} is not positive definite")

    @property
    def delta(self) -> int:
        return 4 * self.a * self.c - self.b * self.b

    def __call__(self, n, m):
        return self.a * n * n + self.b * n * m + self.c * m * m

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    def eigenvalues(self) -> tuple[float, float]:
        mid = 0.5 * (self.a + self.c)
        rad = math.hypot(0.5 * (self.a - self.c), 0.5 * self.b)
        return mid - rad, mid + rad


@dataclass(frozen=True)
class RectangleRegion:
    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float

    def __post_init__(self):
        if not (self.sigma_lo < self.sigma_hi and self.t_lo < self.t_hi):
            raise PreconditionError(f"degenerate region {self}")
        for p in (0.0, 1.0):
            on_vertical = (abs(p - self.sigma_lo) < 1e-12 or abs(p - self.sigma_hi) < 1e-12) and (
                self.t_lo <= 0.0 <= self.t_hi
            )
            on_horizontal = (abs(self.t_lo) < 1e-12 or abs(self.t_hi) < 1e-12) and (
                self.sigma_lo <= p <= self.sigma_hi
            )
            if on_vertical or on_horizontal:
                raise PreconditionError(f"region boundary passes through the pole/special point s = {p}")

    def contains(self, s: complex) -> bool:
        return self.sigma_lo <= s.real <= self.sigma_hi and self.t_lo <= s.imag <= self.t_hi

    def expanded(self, eps: float) -> "RectangleRegion":
        return RectangleRegion(self.sigma_lo - eps, self.sigma_hi + eps, self.t_lo - eps, self.t_hi + eps)


# --------------------------------------------------------------------- lattice


@functools.lru_cache(maxsize=64)
def _lattice_values(q: QuadraticForm, qmax: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values 0 < Q(v) <= qmax with their multiplicities."""
    vals = []
    mmax = int(math.isqrt(4 * q.a * qmax // q.delta)) + 1
    for m in range(-mmax, mmax + 1):
        disc = 4 * q.a * qmax - q.delta * m * m
        if disc < 0:
            continue
        r = math.sqrt(disc)
        lo = math.floor((-q.b * m - r) / (2 * q.a)) - 1
        hi = math.ceil((-q.b * m + r) / (2 * q.a)) + 1
        n = np.arange(lo, hi + 1, dtype=np.int64)
        v = q.a * n * n + q.b * n * m + q.c * m * m
        vals.append(v[(v > 0) & (v <= qmax)])
    allv = np.concatenate(vals)
    uniq, counts = np.unique(allv, return_counts=True)
    return uniq.astype(float), counts.astype(float)


def _rotation(t: float) -> float:
    if abs(t) * math.pi / 2 <= ROTATION_SLACK:
        return 0.0
    return math.copysign(math.pi / 2 - ROTATION_SLACK / abs(t), t)


def _split_terms(s: complex, q: QuadraticForm):
    """Pole part, lattice sum and magnitude of the rotated theta split."""
    phi = _rotation(s.imag)
    lam = 2 * math.pi / math.sqrt(q.delta)
    kmax = TAIL_DECAY / math.cos(phi)
    vals, mult = _lattice_values(q, int(kmax / lam) + 1)
    k = lam * vals
    d = cmath.exp(1j * phi)
    g1, r1 = upper_gamma(s, k * d)
    g2, r2 = upper_gamma(1.0 - s, k * d.conjugate())
    logk = np.log(k)
    t1 = np.exp(-s * logk) * g1
    t2 = np.exp((s - 1.0) * logk) * g2
    lattice = csum(mult * (t1 + t2))
    mag = float(np.sum(mult * (np.abs(t1) * (1 + r1 / EPS) + np.abs(t2) * (1 + r2 / EPS)))) * EPS
    # dbar^x = exp(-i phi x)
    p1 = cmath.exp(-1j * phi * (1.0 - s))
    p0 = cmath.exp(1j * phi * s)
    return p1, p0, lattice, mag, lam


def epstein_lambda(s: complex, q: QuadraticForm) -> EvalResult:
    """s(s-1)(sqrt(D)/2pi)^s Gamma(s) Z(s): entire, symmetric under s -> 1-s."""
    s = complex(s)
    p1, p0, lattice, mag, _ = _split_terms(s, q)
    w = s * (s - 1.0)
    val = s * p1 - (s - 1.0) * p0 + w * lattice
    err = abs(w) * mag + 4 * EPS * (abs(s * p1) + abs((s - 1.0) * p0))
    return EvalResult(val, err)


def epstein_continued(s: complex, q: QuadraticForm) -> EvalResult:
    """Z(s) on the whole plane minus s = 0 (where it equals -1) and s = 1."""
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("Z(s) has a simple pole at s = 1")
    if abs(s) < 1e-12:
        raise PoleError("Z(0) is only defined as a limit (value -1); evaluate nearby")
    p1, p0, lattice, mag, lam = _split_terms(s, q)
    star = p1 / (s - 1.0) - p0 / s + lattice
    if _near_gamma_pole(s, 1e-14):
        return EvalResult(0j, 0.0)  # trivial zeros at negative integers
    lg = log_gamma(s)
    fac = cmath.exp(s * math.log(lam) - lg.value)
    val = fac * star
    err = abs(fac) * (mag + 4 * EPS * abs(star)) + abs(val) * lg.abs_err
    return EvalResult(val, err)


def functional_residual_epstein(s: complex, q: QuadraticForm) -> float:
    s = complex(s)
    a = epstein_lambda(s, q).value
    b = epstein_lambda(1.0 - s, q).value
    return abs(a - b) / max(abs(a), 1e-300)


# --------------------------------------------------------------- direct sum

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _exterior_integral(s: complex, q: QuadraticForm, half_width: float) -> complex:
    """Integral of Q(x)^(-s) over the plane outside the square |x|_inf <= half_width."""
    total = 0j
    for j in range(8):
        a, b = j * math.pi / 4, (j + 1) * math.pi / 4
        th = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
        c, si = np.cos(th), np.sin(th)
        rho = half_width / np.maximum(np.abs(c), np.abs(si))
        qv = q.a * c * c + q.b * c * si + q.c * si * si
        f = np.exp(-s * np.log(qv) + (2.0 - 2.0 * s) * np.log(rho)) / (2.0 * s - 2.0)
        total += 0.5 * (b - a) * complex(np.sum(_GL_WEIGHTS * f))
    return total


def epstein_direct(s: complex, q: QuadraticForm, radius: int = 200) -> EvalResult:
    """Lattice sum over max(|n|, |m|) <= radius, plus the continuum tail.

    The points outside the square are replaced by the integral over the
    exterior of the square of half-width radius + 1/2 (a midpoint rule);
    ``abs_err`` carries the second-order midpoint error, bounded through
    the form's extreme eigenvalues.
    """
    s = complex(s)
    if s.real <= 1.1:
        raise ConvergenceRegionError(f"direct lattice sum needs Re(s) > 1.1, got {s}")
    if int(radius) != radius or radius < 1:
        raise PreconditionError(f"radius must be a positive integer, got {radius!r}")
    n = np.arange(-radius, radius + 1, dtype=float)
    re_parts, im_parts = [], []
    mag = 0.0
    for m in range(-radius, radius + 1):
        qv = q.a * n * n + q.b * n * m + q.c * m * m
        if m == 0:
            qv = qv[qv > 0]
        terms = np.exp(-s * np.log(qv))
        re_parts.append(math.fsum(terms.real.tolist()))
        im_parts.append(math.fsum(terms.imag.tolist()))
        mag += float(np.abs(terms).sum())
    body = complex(math.fsum(re_parts), math.fsum(im_parts))
    tail = _exterior_integral(s, q, radius + 0.5)
    lo, hi = q.eigenvalues()
    sig = s.real
    mid_err = (
        (4.0 * abs(s) * abs(s + 1.0) * (hi / lo) ** 2 / 24.0)
        * lo ** (-sig)
        * 2 * math.pi
        * radius ** (-2 * sig)
        / (2 * sig)
    )
    return EvalResult(body + tail, mid_err + 4 * EPS * mag)


# ------------------------------------------------------------ class numbers


def reduced_forms(delta: int, primitive: bool = True) -> list[QuadraticForm]:
    """Reduced forms of discriminant -delta: |b| <= a <= c, b >= 0 if |b| = a or a = c."""
    if int(delta) != delta or delta <= 0 or (-delta) % 4 not in (0, 1):
        raise PreconditionError(f"-{delta} is not a valid negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= delta:
        for b in range(-a + 1, a + 1):
            if (b * b + delta) % (4 * a):
                continue
            c = (b * b + delta) // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if primitive and math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(QuadraticForm(a, b, c))
        a += 1
    return out


def class_number(delta: int, primitive: bool = True) -> int:
    return len(reduced_forms(delta, primitive))


# ------------------------------------------------------------- zero search


@dataclass
class BoundaryWinding:
    winding: int
    n_points: int
    min_abs: float
    jitter: float = 0.0


@dataclass
class ZeroSearchResult:
    form: QuadraticForm
    region: RectangleRegion
    grid_step: float
    winding: int
    zeros: list[complex] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    boundary_points: int = 0
    jitter: float = 0.0


class _Memo:
    def __init__(self, f):
        self.f = f
        self.cache: dict[complex, complex] = {}

    def __call__(self, s: complex) -> complex:
        v = self.cache.get(s)
        if v is None:
            v = self.f(s)
            self.cache[s] = v
        return v


def _edge(p: complex, q: complex, step: float) -> list[complex]:
    # canonical orientation so shared edges hit the cache from both sides
    flip = (q.real, q.imag) < (p.real, p.imag)
    a, b = (q, p) if flip else (p, q)
    n = max(2, math.ceil(abs(b - a) / step))
    pts = [a + (b - a) * (k / n) for k in range(n)] + [b]
    return pts[::-1] if flip else pts


def _boundary(region: RectangleRegion, step: float) -> list[complex]:
    c = [
        complex(region.sigma_lo, region.t_lo),
        complex(region.sigma_hi, region.t_lo),
        complex(region.sigma_hi, region.t_hi),
        complex(region.sigma_lo, region.t_hi),
    ]
    pts: list[complex] = []
    for i in range(4):
        pts.extend(_edge(c[i], c[(i + 1) % 4], step)[:-1])
    return pts


def _winding_once(f, region: RectangleRegion, step: float, rounds: int) -> tuple[float, int, float]:
    pts = _boundary(region, step)
    vals = [f(p) for p in pts]
    for _ in range(rounds + 1):
        bad = []
        for i in range(len(pts)):
            j = (i + 1) % len(pts)
            if abs(cmath.phase(vals[j] / vals[i])) >= math.pi / 2:
                bad.append(i)
        if not bad:
            break
        if _ == rounds:
            raise BoundaryTooCoarseError(
                f"phase jump >= pi/2 persists on {len(bad)} boundary segments after {rounds} refinements"
            )
        for i in reversed(bad):
            j = (i + 1) % len(pts)
            m = 0.5 * (pts[i] + pts[j])
            pts.insert(i + 1, m)
            vals.insert(i + 1, f(m))
    total = 0.0
    for i in range(len(pts)):
        total += cmath.phase(vals[(i + 1) % len(pts)] / vals[i])
    return total / (2 * math.pi), len(pts), min(abs(v) for v in vals)


def winding_number(f, region: RectangleRegion, step: float, rounds: int = 2, guard: float = 1e-6) -> BoundaryWinding:
    """Argument-principle zero count of ``f`` (a complex -> complex map) in ``region``.

    The boundary is sampled at spacing <= ``step``; segments whose phase
    change reaches pi/2 are halved, at most ``rounds`` times.  If the
    boundary comes within ``guard`` of a zero the rectangle is nudged
    outward and resampled.
    """
    jitter = 0.0
    for attempt in range(4):
        r = region.expanded(jitter) if jitter else region
        turns, npts, mn = _winding_once(f, r, step, rounds)
        if mn > guard:
            w = round(turns)
            if abs(turns - w) > 1e-6:
                raise BoundaryTooCoarseError(f"non-integer winding {turns}")
            return BoundaryWinding(w, npts, mn, jitter)
        jitter += 0.37 * step
    raise BoundaryTooCoarseError("boundary keeps passing near a zero")


def _newton(f, s0: complex, h: float = 1e-6, maxit: int = 60) -> complex:
    s = s0
    fs = f(s)
    for _ in range(maxit):
        d = (f(s + h) - f(s - h)) / (2 * h)
        if d == 0:
            break
        step = fs / d
        lam = 1.0
        for _ in range(30):
            cand = s - lam * step
            fc = f(cand)
            if abs(fc) < abs(fs):
                break
            lam *= 0.5
        else:
            break
        s, fs = cand, fc
        if abs(lam * step) < 1e-14 * max(1.0, abs(s)):
            break
    return s


def _locate(f, region: RectangleRegion, w: int, step: float, out: list, depth: int = 0) -> None:
    if w == 0:
        return
    width = region.sigma_hi - region.sigma_lo
    height = region.t_hi - region.t_lo
    if (w == 1 and max(width, height) <= 4 * step) or depth > 40:
        centre = complex(0.5 * (region.sigma_lo + region.sigma_hi), 0.5 * (region.t_lo + region.t_hi))
        out.append(_newton(f, centre))
        return
    sub_step = min(step, 0.25 * min(width, height) if max(width, height) <= 4 * step else step)
    for frac in (0.5, 0.4813, 0.5371):
        if width >= height:
            cut = region.sigma_lo + frac * width
            halves = (
                RectangleRegion(region.sigma_lo, cut, region.t_lo, region.t_hi),
                RectangleRegion(cut, region.sigma_hi, region.t_lo, region.t_hi),
            )
        else:
            cut = region.t_lo + frac * height
            halves = (
                RectangleRegion(region.sigma_lo, region.sigma_hi, region.t_lo, cut),
                RectangleRegion(region.sigma_lo, region.sigma_hi, cut, region.t_hi),
            )
        try:
            ws = [_winding_once(f, h, sub_step, 2) for h in halves]
        except BoundaryTooCoarseError:
            continue
        counts = [round(x[0]) for x in ws]
        if sum(counts) == w and all(x[2] > 1e-9 for x in ws):
            for h, c in zip(halves, counts):
                _locate(f, h, c, sub_step, out, depth + 1)
            return
    centre = complex(0.5 * (region.sigma_lo + region.sigma_hi), 0.5 * (region.t_lo + region.t_hi))
    out.append(_newton(f, centre))


def zero_search_rectangle(q: QuadraticForm, region: RectangleRegion, grid_step: float = 0.05) -> ZeroSearchResult:
    """Count zeros of Z inside ``region`` by the argument principle, then refine each.

    Zeros are isolated by recursive bisection of the rectangle until each
    piece winds once, then polished by damped Newton iteration on
    (Re Z, Im Z).
    """
    if not grid_step > 0:
        raise PreconditionError("grid_step must be positive")
    f = _Memo(lambda s: epstein_continued(s, q).value)
    bw = winding_number(f, region, grid_step)
    search = region.expanded(bw.jitter) if bw.jitter else region
    found: list[complex] = []
    _locate(f, search, bw.winding, grid_step, found)
    found.sort(key=lambda z: (z.imag, z.real))
    residuals = [abs(epstein_continued(z, q).value) for z in found]
    return ZeroSearchResult(q, region, grid_step, bw.winding, found, residuals, bw.n_points, bw.jitter)
