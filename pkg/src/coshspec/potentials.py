"""Complex-valued integrable potentials, their L1 norms and X/Y factorization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import ParseError, ValidationError
from .quadrature import QuadratureSpec, adaptive_quad, gauss_legendre_panels

KINDS = ("gaussian_sum", "grid", "delta")
SUPPORT_TOL = 1e-14
# bumps farther apart than this many widths are integrated in closed form
DISJOINT_WIDTHS = 12.0


@dataclass(frozen=True)
class GaussianTerm:
    amp: complex
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "amp", complex(self.amp))
        vals = (self.amp.real, self.amp.imag, self.center, self.width)
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError(f"non-finite value in Gaussian term {self!r}")
        if not self.width > 0:
            raise ValidationError(f"Gaussian width must be positive, got {self.width!r}")


@dataclass(frozen=True, eq=False)
class Potential:
    """An immutable complex potential V(x).

    Build instances with :meth:`gaussian_sum`, :meth:`grid` or :meth:`delta`.
    Grid potentials interpolate linearly and vanish outside the node range.
    """

    kind: str
    terms: Tuple[GaussianTerm, ...] = ()
    nodes: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    c: complex = 0j
    name: str = field(default="V")

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown potential kind {self.kind!r}")

    @classmethod
    def gaussian_sum(cls, terms, name="V"):
        terms = tuple(t if isinstance(t, GaussianTerm) else GaussianTerm(*t) for t in terms)
        return cls("gaussian_sum", terms=terms, name=name)

    @classmethod
    def gaussian(cls, amp=1.0, center=0.0, width=1.0, name="V"):
        return cls.gaussian_sum([GaussianTerm(amp, center, width)], name=name)

    @classmethod
    def grid(cls, nodes, values, name="V"):
        x = np.array(nodes, dtype=float)
        v = np.array(values, dtype=complex)
        if x.ndim != 1 or v.shape != x.shape or x.size < 2:
            raise ValidationError("grid needs matching 1-D nodes and values (at least 2)")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise ValidationError("grid contains NaN or Inf")
        if np.any(np.diff(x) <= 0):
            raise ValidationError("grid nodes must be strictly increasing")
        x.setflags(write=False)
        v.setflags(write=False)
        return cls("grid", nodes=x, values=v, name=name)

    @classmethod
    def delta(cls, c, name="V"):
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValidationError("delta coupling must be finite")
        return cls("delta", c=c, name=name)

    def _require_function(self):
        if self.kind == "delta":
            raise ValidationError("a delta potential has no pointwise values")

    def __call__(self, x):
        self._require_function()
        x = np.asarray(x, dtype=float)
        if self.kind == "grid":
            re = np.interp(x, self.nodes, self.values.real, left=0.0, right=0.0)
            im = np.interp(x, self.nodes, self.values.imag, left=0.0, right=0.0)
            out = re + 1j * im
        else:
            out = np.zeros(x.shape, dtype=complex)
            for t in self.terms:
                out = out + t.amp * np.exp(-(((x - t.center) / t.width) ** 2))
        return out[()] if out.ndim == 0 else out

    @property
    def max_abs(self) -> float:
        if self.kind == "delta":
            return abs(self.c)
        if self.kind == "grid":
            return float(np.max(np.abs(self.values)))
        return max((abs(t.amp) for t in self.terms), default=0.0)

    @property
    def is_zero(self) -> bool:
        return self.max_abs == 0.0

    def support(self, tol: float = SUPPORT_TOL) -> Tuple[float, float]:
        """Interval outside which |V| < tol * max|V|."""
        self._require_function()
        if self.kind == "grid":
            return float(self.nodes[0]), float(self.nodes[-1])
        amax = self.max_abs
        if amax == 0.0:
            return -1.0, 1.0
        lo, hi = math.inf, -math.inf
        for t in self.terms:
            a = abs(t.amp)
            if a == 0.0:
                continue
            u = math.sqrt(max(math.log(a / (tol * amax)), 0.0)) + 0.5
            lo = min(lo, t.center - u * t.width)
            hi = max(hi, t.center + u * t.width)
        return lo, hi

    def breakpoints(self):
        if self.kind == "gaussian_sum":
            return sorted({t.center for t in self.terms})
        return []

    def scaled(self, s):
        s = complex(s)
        if self.kind == "delta":
            return Potential.delta(s * self.c, name=self.name)
        if self.kind == "grid":
            return Potential.grid(self.nodes, s * self.values, name=self.name)
        return Potential.gaussian_sum(
            [GaussianTerm(s * t.amp, t.center, t.width) for t in self.terms], name=self.name
        )

    def conjugate(self):
        if self.kind == "delta":
            return Potential.delta(self.c.conjugate(), name=self.name)
        if self.kind == "grid":
            return Potential.grid(self.nodes, np.conj(self.values), name=self.name)
        return Potential.gaussian_sum(
            [GaussianTerm(t.amp.conjugate(), t.center, t.width) for t in self.terms],
            name=self.name,
        )

    def to_json(self) -> dict:
        if self.kind == "delta":
            return {"type": "delta", "c": [self.c.real, self.c.imag]}
        if self.kind == "grid":
            return {
                "type": "grid",
                "nodes": self.nodes.tolist(),
                "values": [[v.real, v.imag] for v in self.values],
            }
        return {
            "type": "gaussian_sum",
            "terms": [
                {"amp": [t.amp.real, t.amp.imag], "center": t.center, "width": t.width}
                for t in self.terms
            ],
        }


def _bumps_disjoint(terms) -> bool:
    for i, a in enumerate(terms):
        for b in terms[i + 1:]:
            if abs(a.center - b.center) <= DISJOINT_WIDTHS * (a.width + b.width):
                return False
    return True


def _grid_l1(nodes, values) -> float:
    # exact integral of |p + q s| over each linear segment
    h = np.diff(nodes)
    p = values[:-1]
    q = values[1:] - values[:-1]
    total = 0.0
    const = np.abs(q) <= 1e-300
    total += float(np.sum(h[const] * np.abs(p[const])))
    p, q, hh = p[~const], q[~const], h[~const]
    if p.size:
        z = p / q
        alpha, beta = z.real, np.abs(z.imag)

        def prim(u):
            r = np.hypot(u, beta)
            with np.errstate(divide="ignore", invalid="ignore"):
                ash = np.where(beta > 0, beta**2 * np.arcsinh(u / np.where(beta > 0, beta, 1.0)), 0.0)
            return 0.5 * (u * r + ash)

        total += float(np.sum(hh * np.abs(q) * (prim(1.0 + alpha) - prim(alpha))))
    return total


def l1_norm(V: Potential, quadrature: Optional[QuadratureSpec] = None) -> float:
    """Integral of |V| over the real line.

    Delta potentials give |c|, grids are integrated exactly segment by
    segment, well separated Gaussian bumps use sum |a_i| w_i sqrt(pi), and
    anything else goes through quadrature (adaptive unless ``quadrature``
    fixes a panel rule).
    """
    if V.kind == "delta":
        return abs(V.c)
    if V.kind == "grid":
        return _grid_l1(V.nodes, V.values)
    if V.is_zero:
        return 0.0
    if quadrature is None and _bumps_disjoint(V.terms):
        return sum(abs(t.amp) * t.width * math.sqrt(math.pi) for t in V.terms)
    return l1_norm_quadrature(V, quadrature)


def l1_norm_quadrature(V: Potential, quadrature: Optional[QuadratureSpec] = None) -> float:
    lo, hi = V.support()
    if quadrature is not None:
        x, w = gauss_legendre_panels(lo, hi, quadrature.panels, quadrature.nodes_per_panel)
        return float(np.sum(w * np.abs(V(x))))
    val = adaptive_quad(lambda x: abs(V(x)), lo, hi, epsabs=1e-13 * V.max_abs, epsrel=1e-11,
                        points=V.breakpoints())
    return val.real


@dataclass(frozen=True)
class BSFactorization:
    """V = Y X with X = |V|^{1/2} and Y = V |V|^{-1/2} (both 0 where V = 0)."""

    potential: Potential

    def X(self, x):
        return np.sqrt(np.abs(self.potential(x)))

    def Y(self, x):
        v = np.asarray(self.potential(x), dtype=complex)
        r = np.sqrt(np.abs(v))
        out = np.divide(v, r, out=np.zeros_like(v), where=r > 0)
        return out[()] if out.ndim == 0 else out

    def XY(self, x):
        """Both factors from a single evaluation of V."""
        v = np.asarray(self.potential(x), dtype=complex)
        r = np.sqrt(np.abs(v))
        y = np.divide(v, r, out=np.zeros_like(v), where=r > 0)
        return r, y


def factorize(V: Potential) -> BSFactorization:
    if V.kind == "delta":
        raise ValidationError("delta potentials have no pointwise factorization")
    return BSFactorization(V)


def _complex(value, where):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ValidationError(f"{where}: expected [re, im], got {value!r}")
    z = complex(float(value[0]), float(value[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"{where}: non-finite complex value {value!r}")
    return z


def _real(value, where):
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(f"{where}: expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ValidationError(f"{where}: non-finite value {value!r}")
    return v


def potential_from_dict(doc, name: str = "V") -> Potential:
    if not isinstance(doc, dict):
        raise ValidationError("potential document must be a JSON object")
    name = str(doc.get("id", name))
    kind = doc.get("type")
    if kind == "delta":
        if "c" not in doc:
            raise ValidationError("delta: missing field 'c'")
        return Potential.delta(_complex(doc["c"], "c"), name=name)
    if kind == "gaussian_sum":
        terms = doc.get("terms")
        if not isinstance(terms, list):
            raise ValidationError("gaussian_sum: 'terms' must be a list")
        parsed = []
        for i, t in enumerate(terms):
            where = f"terms[{i}]"
            if not isinstance(t, dict):
                raise ValidationError(f"{where}: expected an object")
            for key in ("amp", "center", "width"):
                if key not in t:
                    raise ValidationError(f"{where}: missing field {key!r}")
            width = _real(t["width"], f"{where}.width")
            if width <= 0:
                raise ValidationError(f"{where}.width: must be positive, got {width!r}")
            parsed.append(
                GaussianTerm(_complex(t["amp"], f"{where}.amp"), _real(t["center"], f"{where}.center"), width)
            )
        return Potential.gaussian_sum(parsed, name=name)
    if kind == "grid":
        nodes, values = doc.get("nodes"), doc.get("values")
        if not isinstance(nodes, list) or not isinstance(values, list):
            raise ValidationError("grid: 'nodes' and 'values' must be lists")
        xs = [_real(v, f"nodes[{i}]") for i, v in enumerate(nodes)]
        vs = [_complex(v, f"values[{i}]") for i, v in enumerate(values)]
        return Potential.grid(xs, vs, name=name)
    raise ValidationError(f"type: unknown potential type {kind!r}")


def load_potential(config: str, name: str = "V") -> Potential:
    """Parse a JSON potential document.

    Raises:
        ParseError: malformed JSON (message carries line and column).
        ValidationError: well-formed JSON that breaks a potential invariant.
    """
    try:
        doc = json.loads(config)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return potential_from_dict(doc, name=name)


def random_gaussian_sum(rng: np.random.Generator, max_terms: int = 3, name: str = "V") -> Potential:
    """A random complex Gaussian-sum potential used by the bound sweeps."""
    n = int(rng.integers(1, max_terms + 1))
    terms = []
    for _ in range(n):
        mod = rng.uniform(0.2, 2.0)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        terms.append(
            GaussianTerm(mod * complex(math.cos(phase), math.sin(phase)),
                         rng.uniform(-2.0, 2.0), rng.uniform(0.5, 1.5))
        )
    return Potential.gaussian_sum(terms, name=name)

