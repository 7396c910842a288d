"""Matplotlib rendering of delta-model branch traces.

Each figure has the omega-plane on the left and the lambda-plane on the
right.  Curves are coloured by strip index (strip 0 = eigenvalues), and
the points at theta = k pi / 4 are marked and labelled with k.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STRIP_COLORS = {0: "#8b00c9", 1: "#1f4fd1", 2: "#1d9a3a"}
FALLBACK_COLOR = "#666666"
MARKER_TOL = 1e-12

plt.rcParams["svg.hashsalt"] = "coshspec"


def _segments(records, jump=0.5):
    # split a branch wherever strip changes or omega jumps (canonical flips)
    seg = []
    for rec in records:
        if seg and (rec.strip != seg[-1].strip or abs(rec.omega - seg[-1].omega) > jump):
            yield seg
            seg = []
        seg.append(rec)
    if seg:
        yield seg


def _is_marker(theta):
    k = theta / (math.pi / 4.0)
    return abs(k - round(k)) * (math.pi / 4.0) <= MARKER_TOL and round(k) < 8


def plot_traces(traces, path, title=None, max_strip=2):
    """Render omega-plane and lambda-plane panels for one coupling to ``path``."""
    fig, (ax_w, ax_l) = plt.subplots(1, 2, figsize=(12, 5.2), facecolor="w")
    seen = set()
    for tr in traces:
        for seg in _segments(tr.records):
            s = seg[0].strip
            color = STRIP_COLORS.get(s, FALLBACK_COLOR)
            label = None
            if s not in seen:
                seen.add(s)
                label = "strip 0 (eigenvalue)" if s == 0 else f"strip {s} (resonance)"
            ax_w.plot([r.omega.real for r in seg], [r.omega.imag for r in seg],
                      color=color, lw=1.2, label=label)
            ax_l.plot([r.lam.real for r in seg], [r.lam.imag for r in seg], color=color, lw=1.2)
        for rec in tr.records:
            if _is_marker(rec.theta):
                k = int(round(rec.theta / (math.pi / 4.0)))
                color = STRIP_COLORS.get(rec.strip, FALLBACK_COLOR)
                for ax, z in ((ax_w, rec.omega), (ax_l, rec.lam)):
                    ax.plot([z.real], [z.imag], "o", ms=4, color=color)
                    ax.annotate(str(k), (z.real, z.imag), textcoords="offset points",
                                xytext=(3, 3), fontsize=7)
    for j in range(1, max_strip + 1):
        ax_w.axvline(j * math.pi, color="0.7", ls="--", lw=0.8)
    ax_w.axhline(0.0, color="0.85", lw=0.6)
    ax_w.set_xlim(0.0, (max_strip + 1) * math.pi)
    ax_w.set_xlabel(r"Re $\omega$")
    ax_w.set_ylabel(r"Im $\omega$")
    ax_w.legend(loc="best", fontsize=8)
    xmax = max([2.5] + [r.lam.real for tr in traces for r in tr.records])
    ax_l.plot([2.0, xmax], [0.0, 0.0], color="k", lw=2.5, solid_capstyle="butt")
    ax_l.set_xlabel(r"Re $\lambda$")
    ax_l.set_ylabel(r"Im $\lambda$")
    ax_l.set_title(r"$\lambda = -2\cos\omega$", fontsize=10)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)
    return path
