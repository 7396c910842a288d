"""Argument-principle root counting on rectangles."""

from __future__ import annotations

import math

import numpy as np

from .errors import NoConvergence


def _wrap(d):
    return (d + math.pi) % (2.0 * math.pi) - math.pi


def _edge_phase(f, a, b, n, max_jump, max_depth):
    # total change of arg f along the segment a -> b, bisecting where the
    # sampled phase jumps by more than max_jump
    s = np.linspace(0.0, 1.0, n + 1)
    z = a + (b - a) * s
    vals = [complex(f(zz)) for zz in z]
    total = 0.0
    stack = [(z[i], z[i + 1], vals[i], vals[i + 1], 0) for i in range(n)][::-1]
    while stack:
        z0, z1, f0, f1, depth = stack.pop()
        if f0 == 0 or f1 == 0:
            raise NoConvergence(f"function vanishes on the contour near {z0!r}")
        d = _wrap(math.atan2(f1.imag, f1.real) - math.atan2(f0.imag, f0.real))
        if abs(d) <= max_jump:
            total += d
            continue
        if depth >= max_depth:
            raise NoConvergence(f"phase not resolved near {z0!r}; a root may sit on the contour")
        zm = 0.5 * (z0 + z1)
        fm = complex(f(zm))
        stack.append((zm, z1, fm, f1, depth + 1))
        stack.append((z0, zm, f0, fm, depth + 1))
    return total


def winding_number(f, re_lo, re_hi, im_lo, im_hi, samples=256, max_jump=math.pi / 8, max_depth=40):
    """Number of zeros (with multiplicity) of an analytic ``f`` inside a rectangle.

    The boundary is traversed counterclockwise.  Raises NoConvergence if the
    phase cannot be tracked, which happens when a zero lies on the contour.
    """
    corners = [
        complex(re_lo, im_lo),
        complex(re_hi, im_lo),
        complex(re_hi, im_hi),
        complex(re_lo, im_hi),
    ]
    total = 0.0
    for i in range(4):
        total += _edge_phase(f, corners[i], corners[(i + 1) % 4], samples, max_jump, max_depth)
    turns = total / (2.0 * math.pi)
    n = int(round(turns))
    if abs(turns - n) > 1e-3:
        raise NoConvergence(f"winding {turns!r} is not close to an integer")
    return n
