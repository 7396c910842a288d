"""Nystrom discretization of the Birman-Schwinger operator Y G X.

lambda = -2 cos(omega) is an eigenvalue of W_0(b) - V exactly when
Y G_lambda X has eigenvalue 1, i.e. when det(I - M(omega)) = 0 for the
discretized operator M.  Roots are located by Newton's method in omega,
seeded from a scan of the determinant over the physical strip.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import BoundViolation, NoConvergence, ValidationError
from .potentials import Potential, factorize, l1_norm, l1_norm_quadrature
from .quadrature import QuadratureSpec, gauss_legendre_panels
from .resolvent import scaled_kernel
from .spectral import (
    OmegaPoint,
    SpectralParam,
    as_omega,
    canonical_omega,
    lambda_of_omega,
    omega_of_lambda,
    sinc,
)

BOUND_RTOL = 1e-6


def worker_count() -> int:
    try:
        n = int(os.environ.get("COSHSPEC_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


@dataclass(frozen=True)
class SearchSpec:
    """Root search controls for :func:`find_eigenvalues`.

    ``imax=None`` picks the depth beyond which the eigenvalue bound rules
    out any root.  ``scan_panels`` sets the (coarser) panel count used for
    the seed scan and the first Newton pass; None reuses the full rule.
    """

    re_margin: float = 1e-3
    imax: Optional[float] = None
    grid_re: int = 40
    grid_im: int = 40
    scan_panels: Optional[int] = 8
    newton_steps: int = 50
    fd_step: float = 1e-6
    dedup_tol: float = 1e-8
    residual_tol: float = 1e-9


@dataclass(frozen=True, eq=False)
class BSMatrix:
    omega: OmegaPoint
    b: float
    nodes: np.ndarray
    weights: np.ndarray
    entries: np.ndarray


@dataclass(frozen=True)
class EigenReport:
    omega: OmegaPoint
    lambda_: SpectralParam
    determinant_residual: float
    bs_norm: float
    bound_lhs: float
    bound_rhs: float
    satisfied: bool


class BSOperator:
    """Precomputed Nystrom data for one potential, b and quadrature rule."""

    def __init__(self, V: Potential, b: float, q: QuadratureSpec):
        if V.kind == "delta":
            raise ValidationError("delta potentials are handled by coshspec.delta")
        if not b > 0:
            raise ValidationError("b must be positive")
        self.V, self.b, self.q = V, float(b), q
        if q.L is not None:
            lo, hi = -q.L, q.L
        else:
            lo, hi = V.support()
        self.nodes, self.weights = gauss_legendre_panels(lo, hi, q.panels, q.nodes_per_panel)
        X, Y = factorize(V).XY(self.nodes)
        sw = np.sqrt(self.weights)
        self._left = sw * Y
        self._right = X * sw
        self._t = np.abs(self.nodes[:, None] - self.nodes[None, :]) / self.b
        self._eye = np.eye(self.nodes.size)

    @property
    def size(self) -> int:
        return self.nodes.size

    def matrix(self, w: complex) -> np.ndarray:
        G = scaled_kernel(w, self._t) / (2.0 * self.b)
        return self._left[:, None] * G * self._right[None, :]

    def det(self, w: complex) -> complex:
        return _det_i_minus(self.matrix(w), self._eye)

    def newton(self, w: complex, steps: int, h: float, wmax: float):
        """Newton on det(I - M(w)) with a central-difference derivative.

        Returns the final iterate, or None if it runs off the search region.
        """
        for _ in range(steps):
            f = self.det(w)
            df = (self.det(w + h) - self.det(w - h)) / (2.0 * h)
            if df == 0 or not np.isfinite(df):
                return None
            step = f / df
            w = w - step
            if abs(w.real) > math.pi or abs(w.imag) > wmax:
                return None
            if abs(step) <= 1e-13 * max(1.0, abs(w)):
                break
        return w


def _det_i_minus(M, eye):
    sign, logabs = np.linalg.slogdet(eye - M)
    if not np.isfinite(logabs):
        return 0j
    return complex(sign * np.exp(logabs))


def assemble(V: Potential, omega, b: float, q: QuadratureSpec) -> BSMatrix:
    """Symmetrized Nystrom matrix sqrt(w_i) Y(x_i) G(x_i - x_j) X(x_j) sqrt(w_j)."""
    om = as_omega(omega)
    if om.strip_index != 0:
        raise ValidationError("assemble expects omega in the physical strip")
    op = BSOperator(V, b, q)
    return BSMatrix(om, float(b), op.nodes, op.weights, op.matrix(om.value))


def bs_norm(M) -> float:
    """Largest singular value of the discretized operator."""
    A = M.entries if isinstance(M, BSMatrix) else np.asarray(M)
    if A.size == 0:
        return 0.0
    try:
        return float(np.linalg.norm(A, 2))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"SVD failed: {exc}") from exc


def fredholm_det(M) -> complex:
    """det(I - M) from an LU factorization with log-scaled accumulation."""
    A = M.entries if isinstance(M, BSMatrix) else np.asarray(M)
    return _det_i_minus(A, np.eye(A.shape[0]))


def bound_rhs(V: Potential, b: float, l1: Optional[float] = None) -> float:
    return (l1_norm(V) if l1 is None else l1) / (2.0 * math.pi * b)


def default_imax(rhs: float) -> float:
    """Depth in Im(omega) beyond which |sin w / w| exceeds ``rhs`` everywhere on the strip.

    Uses |sin(u + iv)| >= sinh|v| and |w| <= pi + |v|.
    """
    base = math.asinh(max(10.0, 4.0 * rhs))
    if rhs <= 0:
        return base
    g = lambda v: math.sinh(v) / (math.pi + v) - rhs
    hi = 1.0
    while g(hi) < 0:
        hi *= 2.0
    return max(base, brentq(g, 0.0, hi) + 0.5)


def _seed_cells(re, im, D):
    """Grid points at local minima of |D| and centres of cells with nonzero winding."""
    A = np.abs(D)
    nr, ni = A.shape
    seeds = []
    for i in range(nr):
        for j in range(ni):
            nb = A[max(i - 1, 0):i + 2, max(j - 1, 0):j + 2]
            if A[i, j] <= nb.min():
                seeds.append(complex(re[i], im[j]))
    ph = np.angle(D)
    for i in range(nr - 1):
        for j in range(ni - 1):
            loop = [ph[i, j], ph[i + 1, j], ph[i + 1, j + 1], ph[i, j + 1], ph[i, j]]
            d = np.diff(loop)
            d = (d + np.pi) % (2 * np.pi) - np.pi
            if abs(d.sum()) > np.pi:
                seeds.append(complex(0.5 * (re[i] + re[i + 1]), 0.5 * (im[j] + im[j + 1])))
    return seeds


def _dedup(roots, tol):
    out = []
    for r in roots:
        if all(abs(r - o) > tol for o in out):
            out.append(r)
    return out


def find_eigenvalues(
    V: Potential,
    b: float,
    q: Optional[QuadratureSpec] = None,
    search: Optional[SearchSpec] = None,
    check_bound: bool = True,
) -> List[EigenReport]:
    """Locate eigenvalues lambda = -2 cos(omega), omega in the physical strip.

    Returns reports sorted by (Re omega, Im omega).  Every report is checked
    against |sin w / w| <= ||V||_1 / (2 pi b).

    Raises:
        BoundViolation: if any located eigenvalue breaks the bound.
    """
    q = q or QuadratureSpec()
    s = search or SearchSpec()
    if V.kind == "delta":
        raise ValidationError("delta potentials are handled by coshspec.delta")
    if V.is_zero:
        return []
    l1 = l1_norm(V)
    rhs = l1 / (2.0 * math.pi * b)
    imax = s.imax if s.imax is not None else default_imax(rhs)
    wmax = imax + 2.0

    full = BSOperator(V, b, q)
    if s.scan_panels is not None and s.scan_panels < q.panels:
        coarse = BSOperator(V, b, QuadratureSpec(s.scan_panels, q.nodes_per_panel, q.L))
    else:
        coarse = full

    re = np.linspace(s.re_margin, math.pi - s.re_margin, s.grid_re)
    im = np.linspace(-imax, imax, s.grid_im)
    pts = [complex(a, c) for a in re for c in im]
    nw = worker_count()
    if nw > 1:
        with ThreadPoolExecutor(nw) as ex:
            vals = list(ex.map(coarse.det, pts))
    else:
        vals = [coarse.det(p) for p in pts]
    D = np.array(vals).reshape(s.grid_re, s.grid_im)
    seeds = _seed_cells(re, im, D)

    def refine(seed):
        w = coarse.newton(seed, s.newton_steps, s.fd_step, wmax)
        if w is None:
            return None
        if coarse is not full:
            w = full.newton(w, s.newton_steps, s.fd_step, wmax)
        return w

    if nw > 1:
        with ThreadPoolExecutor(nw) as ex:
            raw = list(ex.map(refine, seeds))
    else:
        raw = [refine(sd) for sd in seeds]

    cands = []
    for w in raw:
        if w is None:
            continue
        w = canonical_omega(w)
        if w.real >= math.pi - 1e-12:
            continue
        if abs(full.det(w)) > s.residual_tol:
            continue
        cands.append(w)
    roots = _dedup(sorted(cands, key=lambda z: (round(z.real, 6), round(z.imag, 6))), s.dedup_tol)

    reports = []
    for w in roots:
        M = full.matrix(w)
        lhs = float(abs(sinc(w)))
        reports.append(
            EigenReport(
                omega=OmegaPoint(w),
                lambda_=lambda_of_omega(w),
                determinant_residual=abs(_det_i_minus(M, full._eye)),
                bs_norm=bs_norm(M),
                bound_lhs=lhs,
                bound_rhs=rhs,
                satisfied=lhs <= rhs * (1.0 + BOUND_RTOL),
            )
        )
    reports.sort(key=lambda r: (r.omega.value.real, r.omega.value.imag))
    bad = [r for r in reports if not r.satisfied]
    if check_bound and bad:
        raise BoundViolation(
            f"{len(bad)} eigenvalue(s) violate |sin w/w| <= {rhs:.6g}", reports=bad
        )
    return reports


def verify_bound(report: EigenReport, V: Potential, b: float, rtol: float = BOUND_RTOL) -> bool:
    """Recompute both sides of the bound from lambda and an adaptive L1 integral."""
    if V.kind == "delta":
        l1 = abs(V.c)
    elif V.is_zero:
        l1 = 0.0
    else:
        l1 = l1_norm_quadrature(V)
    w = omega_of_lambda(report.lambda_.value).value
    lhs = float(abs(sinc(w)))
    return lhs <= l1 / (2.0 * math.pi * b) * (1.0 + rtol)
