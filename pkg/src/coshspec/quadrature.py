"""Composite Gauss-Legendre rules and an adaptive wrapper for complex integrands."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import QuadratureDiverged, ValidationError

MAX_NODES = 4096


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout for Nystrom matrices and fixed-order integrals.

    ``L`` is the half-width of the truncated interval [-L, L]; when it is
    None the caller picks the interval (e.g. from a potential's support).
    """

    panels: int = 16
    nodes_per_panel: int = 16
    L: Optional[float] = None

    def __post_init__(self):
        if self.panels < 1 or self.nodes_per_panel < 1:
            raise ValidationError("panels and nodes_per_panel must be positive")
        if self.L is not None and not self.L > 0:
            raise ValidationError("truncation L must be positive")
        if self.total_nodes > MAX_NODES:
            raise ValidationError(
                f"{self.total_nodes} nodes exceeds the cap of {MAX_NODES}"
            )

    @property
    def total_nodes(self) -> int:
        return self.panels * self.nodes_per_panel

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return QuadratureSpec(self.panels * factor, self.nodes_per_panel, self.L)


@lru_cache(maxsize=64)
def _leggauss(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_panels(a, b, panels, order):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    t, wt = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * wt[None, :]).ravel()
    return nodes, weights


def integrate_panels(f, a, b, panels=64, order=16):
    """Fixed composite Gauss-Legendre integral of a vectorized ``f``."""
    x, w = gauss_legendre_panels(a, b, panels, order)
    return np.sum(w * f(x))


def adaptive_quad(f, a, b, epsabs=1e-10, epsrel=1e-10, points=None, limit=400):
    """Adaptive Gauss-Kronrod integral of a complex-valued scalar function.

    Raises:
        QuadratureDiverged: when QUADPACK reports it could not meet the
            requested tolerance within ``limit`` subdivisions.
    """
    kw = dict(epsabs=epsabs, epsrel=epsrel, limit=limit)
    if points is not None and math.isfinite(a) and math.isfinite(b):
        pts = sorted(p for p in points if a < p < b)
        if pts:
            kw["points"] = pts
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            re, _ = integrate.quad(lambda x: complex(f(x)).real, a, b, **kw)
            im, _ = integrate.quad(lambda x: complex(f(x)).imag, a, b, **kw)
        except integrate.IntegrationWarning as exc:
            raise QuadratureDiverged(str(exc)) from exc
    return complex(re, im)
