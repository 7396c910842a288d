"""Exactly solvable delta potential V = c delta(x).

Eigenvalues and resonances are the solutions omega of

    sin(omega) / omega = c / (2 pi b),

classified by strip: Re(omega) in [0, pi) gives a square-integrable
eigenfunction (an eigenvalue), larger real parts give exponentially growing
solutions (resonances).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .contour import winding_number
from .errors import NotARoot, StepCollapse, ValidationError, WindingMismatch
from .quadrature import gauss_legendre_panels
from .resolvent import kernel
from .spectral import OmegaPoint, canonical_omega, dsinc, sinc, symbol

log = logging.getLogger(__name__)

ROOT_TOL = 1e-12
RECORD_TOL = 1e-10
BOUNDARY_TOL = 1e-9
MIN_STEP = 2.0 * math.pi / 2**16
SEEDS_PER_PI = 60
SEEDS_IM = 80


@dataclass(frozen=True)
class DeltaModel:
    c: complex
    b: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if not self.b > 0:
            raise ValidationError("b must be positive")
        if self.c == 0:
            raise ValidationError("delta coupling must be nonzero (r > 0)")

    @classmethod
    def polar(cls, r_over_2pi: float, theta: float, b: float = 1.0):
        """Model with c = r e^{i theta}, given r / (2 pi)."""
        if not r_over_2pi > 0:
            raise ValidationError("r must be positive")
        return cls(2.0 * math.pi * r_over_2pi * cmath.exp(1j * theta), b)

    @property
    def r(self) -> float:
        return abs(self.c)

    @property
    def theta(self) -> float:
        return math.atan2(self.c.imag, self.c.real) % (2.0 * math.pi)

    @property
    def target(self) -> complex:
        return self.c / (2.0 * math.pi * self.b)


def delta_condition(omega, model: DeltaModel):
    """sin(omega)/omega - c/(2 pi b); omega = 0 uses the value sin(0)/0 = 1."""
    return sinc(omega) - model.target


def _newton_vec(w, target, steps=60, tol=1e-13):
    w = np.array(w, dtype=complex)
    for _ in range(steps):
        step = (sinc(w) - target) / dsinc(w)
        step = np.where(np.isfinite(step), step, 0.0)
        w = w - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(w))):
            break
    step = (sinc(w) - target) / dsinc(w)
    return w - np.where(np.isfinite(step), step, 0.0)


def _newton(w: complex, target: complex, steps=60, tol=1e-13):
    for _ in range(steps):
        d = complex(dsinc(w))
        if d == 0:
            return None
        step = (complex(sinc(w)) - target) / d
        w = w - step
        if not cmath.isfinite(w):
            return None
        if abs(step) <= tol * max(1.0, abs(w)):
            return w
    return w


def default_imax(model: DeltaModel, max_strip: int) -> float:
    """Depth where |sin w / w| >= 10 |c/(2 pi b)| across the whole search box."""
    R = (max_strip + 1) * math.pi
    a = 10.0 * abs(model.target)
    g = lambda v: math.sinh(v) / math.hypot(R, v) - a
    lo = 1.0
    if g(lo) >= 0:
        return lo
    hi = 2.0
    while g(hi) < 0:
        hi *= 2.0
    return brentq(g, lo, hi)


def count_roots(model: DeltaModel, max_strip: int, imax: float) -> int:
    """Roots with Re(omega) in [0, (max_strip+1) pi), counted by the argument principle.

    sin(w)/w is even, so zeros come in pairs +-w; the count over the
    symmetric box is halved.
    """
    R = (max_strip + 1) * math.pi
    tgt = model.target
    f = lambda z: complex(sinc(z)) - tgt
    n = winding_number(f, -R, R, -imax, imax)
    return n // 2


def solve_all(
    model: DeltaModel,
    max_strip: int = 0,
    imax: Optional[float] = None,
    check: bool = True,
) -> List[Tuple[complex, int]]:
    """All roots with Re(omega) in [0, (max_strip+1) pi) and |Im omega| <= imax.

    Roots are returned in canonical form (Re > 0, or Re = 0 with Im >= 0),
    sorted by real then imaginary part, each with its strip index.

    Raises:
        WindingMismatch: if ``check`` and the argument-principle count
            differs from the number of roots found.
    """
    if max_strip < 0:
        raise ValidationError("max_strip must be >= 0")
    if imax is None:
        imax = default_imax(model, max_strip)
    R = (max_strip + 1) * math.pi
    tgt = model.target
    nre = SEEDS_PER_PI * (max_strip + 1)
    re = (np.arange(nre) + 0.5) * (R / nre)
    im = np.linspace(-imax, imax, SEEDS_IM)
    seeds = (re[:, None] + 1j * im[None, :]).ravel()
    with np.errstate(all="ignore"):
        roots = _newton_vec(seeds, tgt)
        ok = np.isfinite(roots) & (np.abs(sinc(roots) - tgt) <= ROOT_TOL)
    found = []
    for w in roots[ok]:
        w = canonical_omega(w)
        if w.real >= R or abs(w.imag) > imax:
            continue
        if all(abs(w - o) > 1e-8 for o in found):
            found.append(w)
    found.sort(key=lambda z: (z.real, z.imag))
    if check:
        expected = count_roots(model, max_strip, imax)
        if expected != len(found):
            raise WindingMismatch(
                f"argument principle counts {expected} roots, Newton found {len(found)}",
                expected=expected,
                found=len(found),
            )
    return [(w, OmegaPoint(w).strip_index) for w in found]


@dataclass(frozen=True)
class TraceRecord:
    theta: float
    omega: complex
    lam: complex
    strip: int
    residual: float
    boundary: bool

    @property
    def classification(self) -> str:
        if self.boundary:
            return "boundary"
        return "eigenvalue" if self.strip == 0 else "resonance"


@dataclass
class BranchTrace:
    r_over_2pi: float
    branch_id: int
    records: List[TraceRecord] = field(default_factory=list)
    terminated: Optional[str] = None


def theta_grid(steps: int) -> np.ndarray:
    """Uniform grid on [0, 2 pi] that always contains the points k pi / 4."""
    base = 2.0 * math.pi * np.arange(steps + 1) / steps
    if steps % 8 == 0:
        base[:: steps // 8] = math.pi / 4.0 * np.arange(9)
        return base
    extra = math.pi / 4.0 * np.arange(9)
    return np.unique(np.concatenate([base, extra]))


def _on_boundary(w: complex) -> bool:
    k = round(w.real / math.pi)
    return k >= 1 and abs(w.real - k * math.pi) <= BOUNDARY_TOL


def _advance(w, theta0, theta1, w0):
    """Continue a root of sinc(w) = w0 e^{i theta} from theta0 to theta1.

    Tangent predictor, Newton corrector, step halving on rejection.
    """
    th = theta0
    h = theta1 - theta0
    while th < theta1 - 1e-15:
        h = min(h, theta1 - th)
        if h < MIN_STEP and th + h < theta1 - 1e-15:
            raise StepCollapse(f"step fell below {MIN_STEP:.3g} at theta = {th:.17g}")
        tgt = w0 * cmath.exp(1j * th)
        dw = 1j * tgt / complex(dsinc(w))
        pred = w + h * dw
        new = _newton(pred, w0 * cmath.exp(1j * (th + h)), steps=12)
        d = abs(h * dw)
        if (
            new is not None
            and abs(complex(sinc(new)) - w0 * cmath.exp(1j * (th + h))) <= ROOT_TOL * max(1.0, abs(w0))
            and abs(new - pred) <= 0.25 * d + 1e-10
            and abs(new - w) <= 10.0 * d + 1e-10
        ):
            w = new
            th += h
            h *= 1.5
        else:
            h *= 0.5
            if h < MIN_STEP:
                raise StepCollapse(f"corrector failed below step {MIN_STEP:.3g} at theta = {th:.17g}")
    return w


def trace_branches(
    r_over_2pi: float,
    theta_steps: int = 1024,
    max_strip: int = 2,
    b: float = 1.0,
    margin: int = 3,
    imax: Optional[float] = None,
) -> List[BranchTrace]:
    """Follow every root of sin(w)/w = (r/2 pi b) e^{i theta} as theta runs over [0, 2 pi].

    Roots are started from :func:`solve_all` at theta = 0 in strips
    0..max_strip+margin, because roots drift between strips as theta turns;
    only records that fall in strips 0..max_strip are kept.  A branch that
    drifts beyond the tracked strips is terminated with reason "exit".
    """
    if theta_steps < 64:
        raise ValidationError("theta_steps must be at least 64")
    model = DeltaModel.polar(r_over_2pi, 0.0, b)
    w0 = model.target
    track_strip = max_strip + margin
    if imax is None:
        imax = default_imax(model, track_strip)
    R_track = (track_strip + 1) * math.pi
    starts = solve_all(model, track_strip, imax)
    grid = theta_grid(theta_steps)
    traces = []
    for bid, (w_start, _) in enumerate(starts):
        tr = BranchTrace(r_over_2pi, bid)
        w = w_start
        for j, th in enumerate(grid):
            if j > 0:
                try:
                    w = _advance(w, grid[j - 1], th, w0)
                except StepCollapse as exc:
                    log.warning("branch %d: %s", bid, exc)
                    tr.terminated = "step_collapse"
                    break
            wc = canonical_omega(w)
            if wc.real >= R_track:
                tr.terminated = "exit"
                break
            strip = OmegaPoint(wc).strip_index
            if strip > max_strip:
                continue
            res = abs(complex(sinc(wc)) - w0 * cmath.exp(1j * th))
            tr.records.append(
                TraceRecord(float(th), wc, -2.0 * cmath.cos(wc), strip, res, _on_boundary(wc))
            )
        if tr.records:
            traces.append(tr)
    return traces


def roots_at(traces: Sequence[BranchTrace], theta: float, tol: float = 1e-12):
    """Traced roots recorded at a given theta."""
    out = []
    for tr in traces:
        for rec in tr.records:
            if abs(rec.theta - theta) <= tol:
                out.append(rec.omega)
    return sorted(out, key=lambda z: (z.real, z.imag))


def eigenfunction(model: DeltaModel, omega, x):
    """psi(x) = c G(x) normalized by psi(0) = 1.

    Raises:
        NotARoot: if omega does not solve the delta condition to 1e-8.
    """
    w = canonical_omega(complex(omega))
    if abs(complex(delta_condition(w, model))) > 1e-8:
        raise NotARoot(f"omega = {w!r} does not solve the delta condition")
    return model.c * kernel(OmegaPoint(w), model.b, x)


def growth_rate(omega, b: float = 1.0) -> float:
    """Exponential rate (Re omega - pi)/b of |psi(x)| as |x| -> inf."""
    return (canonical_omega(complex(omega)).real - math.pi) / b


def eigenfunction_norm_sq(model: DeltaModel, omega, L: float, panels: int = 200, order: int = 16) -> float:
    x, wt = gauss_legendre_panels(-L, L, panels, order)
    return float(np.sum(wt * np.abs(eigenfunction(model, omega, x)) ** 2))


def rank_one_fourier_check(model: DeltaModel, omega, k: float) -> float:
    """Residual of the Fourier-space eigen-equation for the delta model.

    Uses psi_hat(k) = c psi(0) / (2 cosh(2 pi b k) + 2 cos omega) with
    psi(0) = 1, and recovers psi(0) independently as the integral of
    psi_hat over k.
    """
    w = canonical_omega(complex(omega))
    if abs(complex(delta_condition(w, model))) > 1e-8:
        raise NotARoot(f"omega = {w!r} does not solve the delta condition")
    if OmegaPoint(w).strip_index != 0:
        raise ValidationError("Fourier eigen-equation needs a root in the physical strip")
    b, c = model.b, model.c
    lam = -2.0 * cmath.cos(w)
    gap = max(math.pi - w.real, 1e-3)
    K = 40.0 / (2.0 * math.pi * b)
    panels = int(math.ceil(2.0 * K / (0.25 * gap / (2.0 * math.pi * b)))) if gap < 1 else 256
    ks, wt = gauss_legendre_panels(-K, K, max(panels, 256), 16)
    psi0 = complex(np.sum(wt * c / (symbol(ks, b) - lam)))
    psi_hat = c / (symbol(k, b) - lam)
    return float(abs((symbol(k, b) - lam) * psi_hat - c * psi0))
