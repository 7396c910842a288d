"""Closed-form free resolvent of W_0(b) and checks of its properties.

The kernel is

    G(x) = sinh(omega x / b) / (2 b sin(omega) sinh(pi x / b)),

evaluated through three regimes in t = |x|/b so that it never overflows:
a series near t = 0, the direct sinh ratio in the middle, and an
exponentially scaled form for large t.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, SingularOmega, TailTooFat, ValidationError, ZeroDisplacement
from .quadrature import QuadratureSpec, gauss_legendre_panels
from .spectral import OmegaPoint, as_omega, omega_of_lambda, sinc, symbol

SMALL_T = 1e-4
LARGE_T = 30.0 / math.pi
SIN_TOL = 1e-14


SMALL_OMEGA = 0.5


def _check_sin(w: complex) -> complex:
    s = cmath.sin(w)
    if abs(s) < SIN_TOL:
        raise SingularOmega(f"sin(omega) = {s!r} vanishes at omega = {w!r}")
    return s


def _check_pole(w: complex):
    # omega = 0 (lambda = -2) is a removable point; omega = k pi, k >= 1, is not
    if abs(w) >= SMALL_OMEGA:
        _check_sin(w)


def _shc(z):
    # sinh(z)/z, only used for |z| well below 1
    z2 = z * z
    return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0))


def sinh_ratio(w: complex, t):
    """sinh(w t) / sinh(pi t) for t >= 0, with the value w/pi at t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape, dtype=complex)
    small = t < SMALL_T
    large = t > LARGE_T
    mid = ~(small | large)
    if small.any():
        ts = t[small]
        out[small] = (w / math.pi) * _shc(w * ts) / _shc(math.pi * ts)
    if mid.any():
        tm = t[mid]
        out[mid] = np.sinh(w * tm) / np.sinh(math.pi * tm)
    if large.any():
        tl = t[large]
        out[large] = (
            np.exp((w - math.pi) * tl) * (1.0 - np.exp(-2.0 * w * tl))
            / -np.expm1(-2.0 * math.pi * tl)
        )
    return out


def _shc_any(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    safe = np.where(small, 1.0, z)
    return np.where(small, _shc(z), np.sinh(safe) / safe)


def _ratio_over_omega(w: complex, t):
    """sinh(w t) / (w sinh(pi t)), stable as w -> 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape, dtype=complex)
    small = t < SMALL_T
    large = t > LARGE_T
    mid = ~(small | large)
    if small.any():
        ts = t[small]
        out[small] = _shc(w * ts) / (math.pi * _shc(math.pi * ts))
    if mid.any():
        tm = t[mid]
        out[mid] = tm * _shc_any(w * tm) / np.sinh(math.pi * tm)
    if large.any():
        tl = t[large]
        z = 2.0 * w * tl
        zs = np.where(z == 0, 1.0, z)
        phi = np.where(z == 0, 1.0, -np.expm1(-zs) / zs)  # (1 - e^{-z}) / z
        out[large] = np.exp((w - math.pi) * tl) * 2.0 * tl * phi / -np.expm1(-2.0 * math.pi * tl)
    return out


def scaled_kernel(w: complex, t):
    """sinh(w t) / (sin(w) sinh(pi t)), finite at w = 0.

    Raises:
        SingularOmega: at the poles w = k pi, k >= 1.
    """
    _check_pole(w)
    if abs(w) < SMALL_OMEGA:
        return _ratio_over_omega(w, t) / complex(sinc(w))
    return sinh_ratio(w, t) / cmath.sin(w)


def kernel(omega, b: float, x):
    """Free resolvent kernel G(x) of (W_0(b) - lambda)^{-1}, lambda = -2 cos(omega).

    Accepts scalar or array ``x``.  Points outside the physical strip are
    evaluated by the same formula (analytic continuation).

    omega = 0 (lambda = -2) is evaluated as the removable limit.

    Raises:
        SingularOmega: at omega = k pi, k >= 1.
    """
    w = as_omega(omega).value
    x = np.asarray(x, dtype=float)
    out = scaled_kernel(w, np.abs(x) / b) / (2.0 * b)
    return out[()] if out.ndim == 0 else out


def diagonal(omega, b: float) -> complex:
    """G(0) = omega / (2 pi b sin(omega)); 1/(2 pi b) at omega = 0."""
    w = as_omega(omega).value
    if abs(w) < 1e-8:
        return complex(1.0 / (2.0 * math.pi * b) * (1.0 + w * w / 6.0))
    s = _check_sin(w)
    return w / (2.0 * math.pi * b * s)


def _ratio_term(a: complex, c: complex) -> complex:
    # e^a / (1 - e^c), rewritten when e^c would overflow
    if c.real > 0:
        return -cmath.exp(a - c) / (1.0 - cmath.exp(-c))
    return cmath.exp(a) / (1.0 - cmath.exp(c))


def kernel_ft_form(omega, b: float, x: float) -> complex:
    """Two-term kernel representation with sigma = i/(2b), kappa = (omega-pi)/(2 pi i b).

    Serves as an independent cross-check of :func:`kernel` away from x = 0.

    Raises:
        ZeroDisplacement: for |x| < 1e-4 b, where the two terms cancel.
        SingularOmega: where sin(omega) = 0, including omega = 0 (both
            terms vanish there; use :func:`kernel` for the limit).
    """
    w = as_omega(omega).value
    _check_sin(w)
    x = float(x)
    if abs(x) < SMALL_T * b:
        raise ZeroDisplacement(f"|x| = {abs(x)!r} is below the two-term threshold")
    sigma = 1j / (2.0 * b)
    kappa = (w - math.pi) / (2j * math.pi * b)
    pref = sigma / cmath.sinh(1j * math.pi * kappa / sigma)
    t1 = _ratio_term(-2j * math.pi * kappa * x, -4j * math.pi * sigma * x)
    t2 = _ratio_term(2j * math.pi * kappa * x, 4j * math.pi * sigma * x)
    return pref * (t1 + t2)


@dataclass(frozen=True)
class ResolventEval:
    omega: OmegaPoint
    b: float

    @property
    def continued(self) -> bool:
        """True when omega lies beyond the physical strip."""
        return self.omega.strip_index > 0

    def value_at(self, x):
        return kernel(self.omega, self.b, x)

    @property
    def diagonal(self) -> complex:
        return diagonal(self.omega, self.b)


@dataclass(frozen=True)
class BoundReport:
    max_ratio: float
    x_at_max: float
    passed: bool


def kernel_bound_check(omega, b: float, xs: Sequence[float], tol: float = 1e-12) -> BoundReport:
    """Largest |G(x)|/|G(0)| over ``xs``; passes when it is at most 1 + tol."""
    om = as_omega(omega)
    if om.strip_index != 0:
        raise ValidationError("kernel bound applies to the physical strip only")
    xs = np.asarray(xs, dtype=float)
    ratios = np.abs(kernel(om, b, xs)) / abs(diagonal(om, b))
    i = int(np.argmax(ratios))
    m = float(ratios[i])
    return BoundReport(m, float(xs[i]), m <= 1.0 + tol)


def fourier_roundtrip_residual(
    omega,
    b: float,
    k: float,
    quadrature: Optional[QuadratureSpec] = None,
    tail: float = 1e-12,
    max_length: float = 2000.0,
) -> float:
    """|int G(x) e^{-2 pi i k x} dx - 1/(2 cosh(2 pi b k) + 2 cos omega)|.

    The integral runs over [-L, L] with L chosen so the kernel tail is
    below ``tail``; the panel count grows with L and with the oscillation
    frequency of the integrand.

    Raises:
        TailTooFat: if the required L exceeds ``max_length * b``.
    """
    om = as_omega(omega)
    if om.strip_index != 0:
        raise ValidationError("Fourier identity holds on the physical strip only")
    w = om.value
    gap = math.pi - w.real
    L = b * math.log(1.0 / tail) / gap if gap > 0 else math.inf
    if quadrature is not None and quadrature.L is not None:
        L = max(L, quadrature.L)
    if L > max_length * b:
        raise TailTooFat(f"need L = {L:.3g} for Re(omega) = {w.real:.6g}")
    q = quadrature or QuadratureSpec(64, 16)
    freq = abs(k) + abs(w.imag) / (2.0 * math.pi * b)
    h = 0.5 * min(b, 1.0 / freq if freq > 0 else math.inf)
    panels = max(q.panels, int(math.ceil(2.0 * L / h)))
    x, wt = gauss_legendre_panels(-L, L, panels, q.nodes_per_panel)
    integral = np.sum(wt * kernel(om, b, x) * np.exp(-2j * math.pi * k * x))
    target = 1.0 / (symbol(k, b) + 2.0 * cmath.cos(w))
    return float(abs(integral - target))


@dataclass(frozen=True)
class AsymptoticsReport:
    b: float
    near_two_gap: float
    near_two_ratio: float
    large_lambda: float
    large_ratio: float
    passed: bool


def diagonal_asymptotics_check(b: float, gap: float = 1e-6, big: float = 1e8) -> AsymptoticsReport:
    """Ratios of G(0) to its leading behaviour as lambda -> 2 and |lambda| -> inf.

    Near the threshold G(0) ~ 1/(2b sqrt(2 - lambda)); far away
    |G(0)| ~ log|lambda| / (pi b |lambda|).  Passes when the first ratio is
    within 2% and the second within 5% of 1.
    """
    lam_near = 2.0 - gap
    g_near = diagonal(omega_of_lambda(lam_near), b)
    r_near = float(abs(g_near * 2.0 * b * math.sqrt(gap)))
    lam_far = -big
    g_far = diagonal(omega_of_lambda(lam_far), b)
    r_far = float(abs(g_far) * math.pi * b * big / math.log(big))
    ok = abs(r_near - 1.0) <= 0.02 and abs(r_far - 1.0) <= 0.05
    return AsymptoticsReport(b, gap, r_near, lam_far, r_far, ok)


def three_lines_check(alpha: complex, x: float, tol: float = 1e-12) -> bool:
    """Check |cosh(alpha x)| <= cosh(x) for 0 <= Re(alpha) <= 1.

    Raises:
        DomainError: if Re(alpha) is outside [0, 1].
    """
    alpha = complex(alpha)
    if not 0.0 <= alpha.real <= 1.0:
        raise DomainError(f"Re(alpha) = {alpha.real!r} is outside [0, 1]")
    ax = abs(float(x))
    if ax < 300.0:
        return abs(cmath.cosh(alpha * ax)) <= math.cosh(ax) * (1.0 + tol)
    # both sides scaled by e^{-|x|}
    lhs = math.exp((alpha.real - 1.0) * ax) * abs(1.0 + cmath.exp(-2.0 * alpha * ax))
    return lhs <= (1.0 + math.exp(-2.0 * ax)) * (1.0 + tol)
