"""Gaussian trial-function certificate for a bound state below 2.

For u_n(x) = exp(-x^2/n^2) the quadratic form ((W_V - 2) u_n, u_n) splits
into a kinetic part computed in Fourier space and the potential integral.
The kinetic part vanishes as n grows, so any V >= 0, V != 0 eventually
makes the form negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CertificationFailed, NotNonnegative, QuadratureDiverged, ValidationError
from .potentials import Potential
from .quadrature import adaptive_quad, gauss_legendre_panels

N_MAX = 2.0**20


@dataclass(frozen=True)
class TrialForm:
    n: float
    b: float
    kinetic: float
    potential_term: complex
    total: complex


def kinetic_closed_form(n: float, b: float) -> float:
    """n sqrt(2 pi) (exp(b^2 / (2 n^2)) - 1), with |u_hat_n|^2 as Plancherel weight."""
    return n * math.sqrt(2.0 * math.pi) * math.expm1(b * b / (2.0 * n * n))


def kinetic_quadrature(n: float, b: float) -> float:
    """Integral of (2 cosh(2 pi b k) - 2) |u_hat_n(k)|^2 dk by panel quadrature."""
    # |u_hat_n|^2 = pi n^2 exp(-2 pi^2 n^2 k^2); integrand is even in k
    if b == 0:
        return 0.0
    s = 1.0 / (2.0 * math.pi * n)  # std of the Gaussian weight in k
    shift = b / (2.0 * math.pi * n * n)  # where exp(2 pi b k) moves the peak
    K = shift + 12.0 * s
    k, w = gauss_legendre_panels(0.0, K, 64, 20)
    a = math.pi * b * k
    # 4 sinh(a)^2 e^{-g} = e^{2a - g} (1 - e^{-2a})^2, safe for large a
    f = math.pi * n * n * np.exp(2.0 * a - 2.0 * (math.pi * n * k) ** 2) * np.expm1(-2.0 * a) ** 2
    return float(2.0 * np.sum(w * f))


def kinetic_term(n: float, b: float, rtol: float = 1e-10) -> float:
    """Kinetic part of the trial form; closed form cross-checked by quadrature."""
    if not n > 0 or b < 0:
        raise ValidationError("need n > 0 and b >= 0")
    closed = kinetic_closed_form(n, b)
    quad = kinetic_quadrature(n, b)
    if abs(closed - quad) > rtol * max(abs(closed), 1e-300):
        raise QuadratureDiverged(
            f"kinetic closed form {closed!r} and quadrature {quad!r} disagree"
        )
    return closed


def potential_term(V: Potential, n: float) -> complex:
    """Integral of V(x) exp(-2 x^2 / n^2)."""
    if V.kind == "delta":
        return V.c
    if V.is_zero:
        return 0j
    lo, hi = V.support()
    return adaptive_quad(
        lambda x: V(x) * math.exp(-2.0 * x * x / (n * n)), lo, hi,
        epsabs=1e-13 * V.max_abs, epsrel=1e-12, points=V.breakpoints(),
    )


def form_value(V: Potential, n: float, b: float) -> TrialForm:
    if V.kind == "delta":
        raise ValidationError("delta potentials are handled by coshspec.delta")
    kin = kinetic_term(n, b)
    pot = potential_term(V, n)
    return TrialForm(float(n), float(b), kin, pot, kin - pot)


def check_nonnegative(V: Potential, samples: int = 2001):
    """Raise unless V is real, nonnegative and not identically zero on samples."""
    if V.kind == "delta":
        raise ValidationError("delta potentials are handled by coshspec.delta")
    lo, hi = V.support()
    x = np.linspace(lo, hi, samples)
    if V.kind == "grid":
        x = np.union1d(x, V.nodes)
    v = np.asarray(V(x), dtype=complex)
    scale = float(np.max(np.abs(v)))
    if scale == 0.0:
        raise ValidationError("V must not vanish identically")
    if np.any(np.abs(v.imag) > 1e-14 * scale):
        raise NotNonnegative("V takes non-real values")
    if np.any(v.real < -1e-14 * scale):
        raise NotNonnegative("V takes negative values")


def certify_bound_state(V: Potential, b: float):
    """Double n from 1 until the trial form is negative.

    Returns (n, total) for the first certifying width.

    Raises:
        NotNonnegative: V is complex or negative somewhere.
        ValidationError: V vanishes identically.
        CertificationFailed: no certificate up to n = 2**20.
    """
    check_nonnegative(V)
    n = 1.0
    while n <= N_MAX:
        tf = form_value(V, n, b)
        if tf.total.real < 0:
            return n, tf.total.real
        n *= 2.0
    raise CertificationFailed(f"no negative trial form up to n = {N_MAX:g}")


def scan(V: Potential, b: float, n_values=None):
    """Trial forms for n = 1, 2, 4, ..., 2**12 (or the given widths)."""
    if n_values is None:
        n_values = [2.0**j for j in range(13)]
    return [form_value(V, n, b) for n in n_values]
