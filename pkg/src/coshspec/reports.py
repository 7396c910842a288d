"""Delimited (CSV) and JSON writers for every report the CLI emits.

Floats are printed with 17 significant digits so they parse back exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

EIGEN_COLUMNS = (
    "potential_id", "b", "re_omega", "im_omega", "re_lambda", "im_lambda",
    "det_residual", "bs_norm", "bound_lhs", "bound_rhs", "satisfied",
)
TRACE_COLUMNS = (
    "r_over_2pi", "theta", "re_omega", "im_omega", "re_lambda", "im_lambda",
    "strip", "branch_id", "residual", "boundary",
)
SCAN_COLUMNS = ("n", "b", "kinetic", "re_potential_term", "total")
KERNEL_COLUMNS = ("x", "re_g", "im_g", "abs_ratio")
ROOT_COLUMNS = ("r_over_2pi", "theta", "re_omega", "im_omega", "re_lambda", "im_lambda", "strip", "residual")


def fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if v == 0.0:
            v = 0.0  # drop the sign of -0.0
        return format(v, ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return str(v)
        return 0.0 if v == 0.0 else v
    return v


def eigen_rows(reports, potential_id, b):
    for r in reports:
        w, lam = r.omega.value, r.lambda_.value
        yield (potential_id, float(b), w.real, w.imag, lam.real, lam.imag,
               float(r.determinant_residual), float(r.bs_norm),
               float(r.bound_lhs), float(r.bound_rhs), bool(r.satisfied))


def trace_rows(traces):
    for tr in traces:
        for rec in tr.records:
            yield (float(tr.r_over_2pi), rec.theta, rec.omega.real, rec.omega.imag,
                   rec.lam.real, rec.lam.imag, int(rec.strip), int(tr.branch_id),
                   float(rec.residual), bool(rec.boundary))


def scan_rows(forms):
    for f in forms:
        yield (f.n, f.b, f.kinetic, f.potential_term.real, f.total.real)


def render(columns, rows, format="csv") -> str:
    rows = list(rows)
    if format == "json":
        recs = [{k: _jsonable(v) for k, v in zip(columns, row)} for row in rows]
        return json.dumps(recs, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write(path, columns, rows, format="csv") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(columns, rows, format))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
