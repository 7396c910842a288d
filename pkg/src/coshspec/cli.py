"""Command-line interface.

Subcommands: resolvent, delta, figures, bs, variational.
Exit codes: 0 ok, 2 usage, 3 validation, 4 numerical-check failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import reports
from .errors import CoshSpecError, ParseError, ValidationError
from .quadrature import QuadratureSpec

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_CHECK = 0, 2, 3, 4
DEFAULT_R = (2.0, 0.25, 0.2)

log = logging.getLogger("coshspec")


class CheckFailed(Exception):
    pass


def parse_complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2 or not all(math.isfinite(p) for p in parts):
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    return complex(parts[0], parts[1])


def positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def _tag(r: float) -> str:
    return format(r, "g")


def _emit(args, name, columns, rows):
    ext = "json" if args.format == "json" else "csv"
    path = reports.write(Path(args.output_dir) / f"{name}.{ext}", columns, rows, args.format)
    print(f"wrote {path}")
    return path


def _load(path):
    from .potentials import load_potential

    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from exc
    try:
        return load_potential(text, name=Path(path).stem)
    except (ParseError, ValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def cmd_resolvent(args):
    from .resolvent import (
        SIN_TOL, diagonal, fourier_roundtrip_residual, kernel, kernel_bound_check, kernel_ft_form,
    )
    from .spectral import OmegaPoint

    om = OmegaPoint(args.omega)
    xs = np.linspace(-args.xmax, args.xmax, args.samples)
    g = kernel(om, args.b, xs)
    g0 = diagonal(om, args.b)
    ratio = np.abs(g) / abs(g0)
    _emit(args, "kernel_samples", reports.KERNEL_COLUMNS,
          ((float(x), v.real, v.imag, float(r)) for x, v, r in zip(xs, g, ratio)))

    checks = {"omega_re": om.value.real, "omega_im": om.value.imag, "b": args.b,
              "strip": om.strip_index, "diagonal_re": g0.real, "diagonal_im": g0.imag}
    failed = []
    far = xs[np.abs(xs) >= 1e-3 * args.b]
    if abs(np.sin(om.value)) < SIN_TOL:
        checks["form_equivalence"] = "skipped (two-term form undefined at sin(omega) = 0)"
    elif far.size:
        rel = [abs(kernel_ft_form(om, args.b, x) - kernel(om, args.b, x)) / abs(kernel(om, args.b, x))
               for x in far]
        checks["form_equivalence_max_rel"] = float(max(rel))
        if checks["form_equivalence_max_rel"] > 1e-10:
            failed.append("form_equivalence")
    if args.check_bound:
        rep = kernel_bound_check(om, args.b, xs)
        checks["bound_max_ratio"] = rep.max_ratio
        checks["bound_passed"] = rep.passed
        if not rep.passed:
            failed.append("bound")
    if args.check_fourier:
        res = fourier_roundtrip_residual(om, args.b, args.k)
        checks["fourier_k"] = args.k
        checks["fourier_residual"] = res
        if res > 1e-8:
            failed.append("fourier")
    checks["passed"] = not failed
    out = Path(args.output_dir) / ("resolvent_checks.json" if args.format == "json" else "resolvent_checks.txt")
    if args.format == "json":
        out.write_text(json.dumps(checks, indent=1) + "\n")
    else:
        out.write_text("".join(f"{k}={reports.fmt(v)}\n" for k, v in checks.items()))
    for k, v in checks.items():
        print(f"{k}={reports.fmt(v)}")
    if failed:
        raise CheckFailed("failed checks: " + ", ".join(failed))


def _trace_outputs(args, r, traces):
    from .plotting import plot_traces

    tag = _tag(r)
    _emit(args, f"delta_trace_r{tag}", reports.TRACE_COLUMNS, reports.trace_rows(traces))
    markers = []
    for tr in traces:
        for rec in tr.records:
            k = rec.theta / (math.pi / 4.0)
            if abs(k - round(k)) < 1e-9 and round(k) < 8:
                markers.append(rec)
    markers.sort(key=lambda rec: (rec.theta, rec.omega.real, rec.omega.imag))
    _emit(args, f"delta_markers_r{tag}", reports.ROOT_COLUMNS,
          ((float(r), m.theta, m.omega.real, m.omega.imag, m.lam.real, m.lam.imag, m.strip, m.residual)
           for m in markers))
    fig = Path(args.output_dir) / f"delta_r{tag}.{args.fig_format}"
    plot_traces(traces, fig, title=f"r/2π = {tag}", max_strip=args.max_strip)
    print(f"wrote {fig}")
    worst = max((rec.residual for tr in traces for rec in tr.records), default=0.0)
    for tr in traces:
        if tr.terminated == "step_collapse":
            log.warning("r/2pi=%s branch %d split by step collapse", tag, tr.branch_id)
    return worst


def _run_traces(args, r_values):
    from .delta import RECORD_TOL, trace_branches

    bad = []
    for r in r_values:
        traces = trace_branches(r, args.steps, args.max_strip, b=args.b)
        worst = _trace_outputs(args, r, traces)
        print(f"r_over_2pi={_tag(r)} branches={len(traces)} max_residual={reports.fmt(worst)}")
        if worst > RECORD_TOL:
            bad.append(r)
    if bad:
        raise CheckFailed(f"residual above tolerance for r/2pi in {bad}")


def cmd_delta(args):
    from .delta import DeltaModel, delta_condition, solve_all

    if args.theta is None:
        return _run_traces(args, [args.r_over_2pi])
    model = DeltaModel.polar(args.r_over_2pi, args.theta, args.b)
    roots = solve_all(model, args.max_strip)
    rows = []
    for w, strip in roots:
        lam = -2.0 * np.cos(w)
        res = abs(complex(delta_condition(w, model)))
        rows.append((args.r_over_2pi, float(args.theta), w.real, w.imag, lam.real, lam.imag, strip, res))
    _emit(args, f"delta_roots_r{_tag(args.r_over_2pi)}_theta{_tag(args.theta)}", reports.ROOT_COLUMNS, rows)
    counts = [sum(1 for _, s in roots if s == k) for k in range(args.max_strip + 1)]
    for k, n in enumerate(counts):
        print(f"strip{k}_count={n}")


def cmd_figures(args):
    _run_traces(args, args.r_over_2pi)


def cmd_bs(args):
    from .birman_schwinger import find_eigenvalues, verify_bound
    from .potentials import random_gaussian_sum

    if args.nodes % 16:
        raise ValidationError("--nodes must be a multiple of 16")
    q = QuadratureSpec(args.nodes // 16, 16)
    if args.random:
        rng = np.random.default_rng(args.seed)
        pots = [random_gaussian_sum(rng, name=f"random{i:03d}") for i in range(args.random)]
    elif args.potential:
        pots = [_load(args.potential)]
    else:
        raise ValidationError("either --potential or --random is required")
    rows, violations, unverified = [], [], []
    for V in pots:
        reps = find_eigenvalues(V, args.b, q, check_bound=False)
        if not all(r.satisfied for r in reps):
            violations.append(V.name)
        if args.verify_bound:
            unverified += [V.name for r in reps if not verify_bound(r, V, args.b)]
        rows.extend(reports.eigen_rows(reps, V.name, args.b))
        print(f"{V.name}: {len(reps)} eigenvalue(s)")
    _emit(args, "eigenvalues", reports.EIGEN_COLUMNS, rows)
    if violations or unverified:
        raise CheckFailed(f"bound violated for {sorted(set(violations + unverified))}")


def cmd_variational(args):
    from .variational import certify_bound_state, scan

    V = _load(args.potential)
    if V.kind != "delta" and V.is_zero:
        raise ValidationError("V must not vanish identically")
    _emit(args, "variational_scan", reports.SCAN_COLUMNS, reports.scan_rows(scan(V, args.b)))
    if args.certify:
        n, total = certify_bound_state(V, args.b)
        line = f"certificate n_star={reports.fmt(n)} total={reports.fmt(total)}"
        (Path(args.output_dir) / "certificate.txt").write_text(line + "\n")
        print(line)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=".", help="directory for emitted files")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    common.add_argument("--b", type=positive_float, default=1.0, help="Weyl parameter b > 0")

    p = argparse.ArgumentParser(prog="coshspec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("resolvent", parents=[common], help="sample and check the free resolvent")
    r.add_argument("--omega", type=parse_complex, required=True, metavar="RE,IM")
    r.add_argument("--xmax", type=positive_float, default=10.0)
    r.add_argument("--samples", type=int, default=2001)
    r.add_argument("--check-bound", action="store_true")
    r.add_argument("--check-fourier", action="store_true")
    r.add_argument("--k", type=float, default=0.0, help="frequency for --check-fourier")
    r.set_defaults(func=cmd_resolvent)

    fig_opts = argparse.ArgumentParser(add_help=False)
    fig_opts.add_argument("--steps", type=int, default=1024)
    fig_opts.add_argument("--max-strip", type=int, default=2)
    fig_opts.add_argument("--fig-format", choices=("svg", "png", "pdf"), default="svg")

    d = sub.add_parser("delta", parents=[common, fig_opts], help="delta-potential roots or branch trace")
    d.add_argument("--r-over-2pi", type=positive_float, required=True)
    d.add_argument("--theta", type=float, default=None, help="solve at one theta instead of tracing")
    d.set_defaults(func=cmd_delta)

    f = sub.add_parser("figures", parents=[common, fig_opts], help="branch figures for several couplings")
    f.add_argument("--r-over-2pi", type=positive_float, nargs="+", default=list(DEFAULT_R))
    f.set_defaults(func=cmd_figures)

    b = sub.add_parser("bs", parents=[common], help="Birman-Schwinger eigenvalue search")
    b.add_argument("--potential", metavar="FILE.json")
    b.add_argument("--random", type=int, default=0, metavar="N", help="sweep N random potentials")
    b.add_argument("--nodes", type=int, default=256)
    b.add_argument("--verify-bound", action="store_true")
    b.set_defaults(func=cmd_bs)

    v = sub.add_parser("variational", parents=[common], help="Gaussian trial-form scan")
    v.add_argument("--potential", metavar="FILE.json", required=True)
    v.add_argument("--certify", action="store_true")
    v.set_defaults(func=cmd_variational)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    Path(args.output_dir).mkdir(parents=True, exist_ok=True)
    try:
        args.func(args)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CoshSpecError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
