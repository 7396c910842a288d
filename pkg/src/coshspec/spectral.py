"""Spectral parameterization lambda = -2 cos(omega) and the symbol of W_0(b).

The strip Re(omega) in [0, pi) is mapped one-to-one onto the cut plane
C minus [2, inf).  Points with larger real part (the resonance strips) are
represented by the same :class:`OmegaPoint` type and carry their strip index.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CutPointError, ValidationError

CUT_TOL = 1e-12
# Re(omega) in (-NEG_TOL, 0) is treated as rounding noise on the left edge.
NEG_TOL = 1e-12


@dataclass(frozen=True)
class OmegaPoint:
    """A point omega with Re(omega) >= 0, tagged by strip and half-plane."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValidationError(f"omega must be finite, got {v!r}")
        if v.real < -NEG_TOL:
            raise ValidationError(f"omega must have Re >= 0, got {v!r}")
        object.__setattr__(self, "value", v)

    @property
    def strip_index(self) -> int:
        return max(0, int(math.floor(self.value.real / math.pi)))

    @property
    def half_plane(self) -> int:
        im = self.value.imag
        return (im > 0) - (im < 0)

    @property
    def in_omega(self) -> bool:
        """True when omega lies in the physical strip Re in [0, pi)."""
        return self.strip_index == 0

    def __complex__(self):
        return self.value


@dataclass(frozen=True)
class SpectralParam:
    value: complex
    cut_tol: float = CUT_TOL

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    @property
    def on_cut(self) -> bool:
        lam = self.value
        return abs(lam.imag) <= self.cut_tol and lam.real >= 2.0 - self.cut_tol

    def __complex__(self):
        return self.value


@dataclass(frozen=True)
class ModelParams:
    b: float = 1.0

    def __post_init__(self):
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ValidationError(f"b must be a positive real, got {self.b!r}")


def as_omega(w) -> OmegaPoint:
    return w if isinstance(w, OmegaPoint) else OmegaPoint(complex(w))


def as_lambda(lam) -> SpectralParam:
    return lam if isinstance(lam, SpectralParam) else SpectralParam(complex(lam))


def lambda_of_omega(omega) -> SpectralParam:
    """Return lambda = -2 cos(omega)."""
    w = as_omega(omega).value
    return SpectralParam(-2.0 * cmath.cos(w))


def omega_of_lambda(lam) -> OmegaPoint:
    """Invert lambda = -2 cos(omega) on the strip Re(omega) in [0, pi).

    The principal arccosine of -lambda/2 already has real part in [0, pi]
    and satisfies sign(Im omega) = sign(Im lambda) there.  On the left edge
    (real lambda <= -2) both +i t and -i t are preimages; the one with
    Im(omega) >= 0 is returned.  One Newton step polishes the result.

    Raises:
        CutPointError: if lambda lies on [2, inf) within the cut tolerance.
    """
    sp = as_lambda(lam)
    if sp.on_cut:
        raise CutPointError(f"lambda = {sp.value!r} lies on the cut [2, inf)")
    lam_v = sp.value
    w = cmath.acos(-lam_v / 2.0)
    if w.real < 0:
        w = -w
    s = cmath.sin(w)
    if abs(s) > 1e-6:
        w = w - (-2.0 * cmath.cos(w) - lam_v) / (2.0 * s)
    if abs(w.real) <= NEG_TOL * max(1.0, abs(w)):
        w = complex(0.0, abs(w.imag))
    elif w.real < 0:
        w = -w
    return OmegaPoint(w)


def symbol(k, b):
    """Fourier multiplier 2 cosh(2 pi b k) of W_0(b)."""
    return 2.0 * np.cosh(2.0 * np.pi * b * np.asarray(k, dtype=float))


def sinc(w):
    """sin(w)/w with the removable value 1 at w = 0 (complex, vectorized)."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1e-4
    safe = np.where(small, 1.0, w)
    w2 = w * w
    out = np.where(small, 1.0 - w2 / 6.0 + w2 * w2 / 120.0, np.sin(safe) / safe)
    return out[()] if out.ndim == 0 else out


def dsinc(w):
    """Derivative of sin(w)/w, i.e. (w cos w - sin w)/w**2."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1e-3
    safe = np.where(small, 1.0, w)
    series = -w / 3.0 + w**3 / 30.0 - w**5 / 840.0
    out = np.where(small, series, (safe * np.cos(safe) - np.sin(safe)) / safe**2)
    return out[()] if out.ndim == 0 else out


def canonical_omega(w: complex) -> complex:
    """Map a solution of an even equation in omega to its Re >= 0 representative."""
    w = complex(w)
    if abs(w.real) <= NEG_TOL * max(1.0, abs(w)):
        return complex(0.0, abs(w.imag))
    return -w if w.real < 0 else w
