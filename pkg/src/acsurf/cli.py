"""Command-line surface: run, sweep, oned, validate.

The CLI is a thin shell over the library; it parses a flat key = value
config file plus flag overrides, runs the requested experiment, and writes
self-describing artifacts (ASCII PLY with vertex colors, raw field text,
energy-trace CSV, pattern report). Exit codes: 0 success, 1 usage,
2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import one_dim, output
from .mesh import MeshError, load_mesh
from .operators import LinearSolveError, assemble_stiffness
from .patterns import classify, localized_init, locality_score, random_init
from .solver import SolverAbort, SolverConfig, run as run_solver

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_DEFAULTS = {
    "b": 0.0,
    "eps": 1.0,
    "dt": 0.1,
    "iterations": 500,
    "seed": 0,
    "init": "random",
    "amplitude": 0.1,
    "center": 0,
    "radius": 10,
    "background": 0.0,
    "stop_tolerance": 1e-7,
    "energy_stride": 1,
    "dead_band": 0.1,
}

_COERCE = {
    "b": float,
    "eps": float,
    "dt": float,
    "iterations": int,
    "seed": int,
    "init": str,
    "amplitude": float,
    "center": int,
    "radius": int,
    "background": float,
    "stop_tolerance": float,
    "energy_stride": int,
    "dead_band": float,
    "b_list": str,
}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_config(path):
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{ln}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _COERCE:
            raise InputError(f"{path}:{ln}: unknown config key {key!r}")
        try:
            values[key] = _COERCE[key](val)
        except ValueError:
            raise InputError(f"{path}:{ln}: bad value for {key}: {val!r}") from None
    return values


def _settings(args):
    """Merge defaults <- config file <- command-line flags."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        merged.update(_read_config(args.config))
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    if merged["dt"] <= 0:
        raise UsageError(f"dt must be positive, got {merged['dt']}")
    if merged["eps"] <= 0:
        raise UsageError(f"eps must be positive, got {merged['eps']}")
    if merged["iterations"] < 1:
        raise UsageError("iterations must be >= 1")
    if merged["amplitude"] <= 0:
        raise UsageError("amplitude must be positive")
    if merged["stop_tolerance"] < 0:
        raise UsageError("stop_tolerance must be >= 0")
    if merged["energy_stride"] < 1:
        raise UsageError("energy_stride must be >= 1")
    if merged["init"] not in ("random", "localized"):
        raise UsageError(f"init must be 'random' or 'localized', got {merged['init']!r}")
    return merged


def _config_lines(merged, mesh_path=None):
    lines = [f"{k} = {merged[k]}" for k in sorted(merged)]
    if mesh_path is not None:
        lines.insert(0, f"mesh = {mesh_path}")
    return lines


def _load(mesh_path, require_closed=True):
    try:
        return load_mesh(mesh_path, require_closed=require_closed)
    except (MeshError, OSError) as exc:
        raise InputError(str(exc)) from None


def _init_field(mesh, merged):
    if merged["init"] == "localized":
        return localized_init(
            mesh,
            merged["seed"],
            merged["center"],
            merged["radius"],
            merged["amplitude"],
            merged["background"],
        )
    return random_init(mesh, merged["seed"], merged["amplitude"]), None


def _solver_config(merged):
    return SolverConfig(
        b=merged["b"],
        eps=merged["eps"],
        dt=merged["dt"],
        max_iterations=merged["iterations"],
        seed=merged["seed"],
        stop_tolerance=merged["stop_tolerance"],
        energy_log_stride=merged["energy_stride"],
    )


def cmd_run(args):
    merged = _settings(args)
    mesh = _load(args.mesh)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = _config_lines(merged, args.mesh)

    u0, region = _init_field(mesh, merged)
    op = assemble_stiffness(mesh)
    final, trace = run_solver(mesh, u0, _solver_config(merged), operator=op)
    report = classify(mesh, final.values, dead_band=merged["dead_band"], areas=op.mass)

    output.write_ply(out / "field.ply", mesh, final.values, comments=header)
    output.write_field_txt(out / "field.txt", final.values, comments=header)
    output.write_trace_csv(out / "trace.csv", trace, comments=header)
    extra = []
    if region is not None:
        score = locality_score(mesh, final.values, region, areas=op.mass)
        extra = [
            f"inside_variance = {score.inside_variance:.17g}",
            f"outside_variance = {score.outside_variance:.17g}",
            f"outside_empty = {score.outside_empty}",
        ]
    with open(out / "report.txt", "w") as fh:
        for c in header:
            fh.write(f"# {c}\n")
        fh.write(report.to_text() + "\n")
        for line in extra:
            fh.write(line + "\n")
    print(
        f"run finished at step {final.time_level}: label={report.label} "
        f"energy={trace.energy[-1]:.6g} -> {out}"
    )
    return EXIT_OK


def cmd_sweep(args):
    merged = _settings(args)
    blist_raw = args.b_list if args.b_list is not None else merged.get("b_list", "")
    tokens = [t for t in str(blist_raw).replace(",", " ").split() if t]
    try:
        b_values = [float(t) for t in tokens]
    except ValueError:
        raise UsageError(f"bad b-list {blist_raw!r}") from None
    mesh = _load(args.mesh)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    op = assemble_stiffness(mesh)
    u0 = (
        _init_field(mesh, merged)[0]
        if merged["init"] == "localized"
        else random_init(mesh, merged["seed"], merged["amplitude"])
    )

    rows = []
    for b in b_values:
        cfg = dict(merged, b=b)
        try:
            final, trace = run_solver(mesh, u0.copy(), _solver_config(cfg), operator=op)
            report = classify(
                mesh, final.values, dead_band=merged["dead_band"], areas=op.mass
            )
            rows.append(
                f"{b},{report.label},{report.minority_fraction:.6g},"
                f"{report.minority_component_count()},{trace.energy[-1]:.17g}"
            )
        except (LinearSolveError, SolverAbort, ValueError) as exc:
            message = str(exc).replace(",", ";")
            rows.append(f"{b},error: {message},,,")
    path = out / "sweep.csv"
    with open(path, "w") as fh:
        for c in _config_lines(merged, args.mesh):
            fh.write(f"# {c}\n")
        fh.write("b,class,minority_fraction,component_count,final_energy\n")
        for row in rows:
            fh.write(row + "\n")
    print(f"sweep of {len(b_values)} b values -> {path}")
    return EXIT_OK


def cmd_oned(args):
    if args.x1 <= args.x0:
        raise UsageError("window must satisfy x1 > x0")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    profile = one_dim.integrate_stationary(
        args.u0, args.du0, args.b, (args.x0, args.x1), tol=args.tol,
        n_samples=args.samples,
    )
    fi = one_dim.first_integral(profile)
    sign = one_dim.concavity_sign(profile)
    concavity = {1: "concave_up", -1: "concave_down", 0: "flat"}[sign]
    header = [
        f"b = {args.b}",
        f"u0 = {args.u0}",
        f"du0 = {args.du0}",
        f"window = [{args.x0}, {args.x1}]",
        f"tol = {args.tol}",
    ]
    output.write_profile_csv(out / "profile.csv", profile, fi.residuals, comments=header)
    lines = [
        f"first_integral_C = {fi.C:.17g}",
        f"first_integral_drift = {fi.drift:.17g}",
        f"concavity = {concavity}",
    ]
    if profile.blowup_x is not None:
        lines.append(f"blowup_x = {profile.blowup_x:.9g}")
    if args.b == 0:
        ref, _ = one_dim.kink_profile(profile.x)
        lines.append(f"kink_reference_max_error = {np.abs(profile.u - ref).max():.17g}")
    with open(out / "oned_report.txt", "w") as fh:
        for c in header:
            fh.write(f"# {c}\n")
        for line in lines:
            fh.write(line + "\n")
    print("\n".join(lines))
    return EXIT_OK


def cmd_validate(args):
    mesh = _load(args.mesh, require_closed=False)
    print(str(mesh.validate()))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="acsurf", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--mesh", required=True, help="OBJ or OFF mesh file")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--config", help="flat key = value config file")
        sp.add_argument("--b", type=float)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--dt", type=float)
        sp.add_argument("--iters", dest="iterations", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--init", choices=["random", "localized"])
        sp.add_argument("--amplitude", type=float)
        sp.add_argument("--center", type=int)
        sp.add_argument("--radius", type=int)
        sp.add_argument("--background", type=float)
        sp.add_argument("--stop-tol", dest="stop_tolerance", type=float)
        sp.add_argument("--energy-stride", dest="energy_stride", type=int)
        sp.add_argument("--dead-band", dest="dead_band", type=float)

    sp = sub.add_parser("run", help="single simulation with artifacts")
    add_common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("sweep", help="sweep the reaction offset b")
    add_common(sp)
    sp.add_argument("--b-list", help="comma- or space-separated b values")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("oned", help="stationary 1-d profile analysis")
    sp.add_argument("--out", required=True)
    sp.add_argument("--b", type=float, default=0.0)
    sp.add_argument("--u0", type=float, default=0.0)
    sp.add_argument("--du0", type=float, default=0.5)
    sp.add_argument("--x0", type=float, default=0.0)
    sp.add_argument("--x1", type=float, default=4.0)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--samples", type=int, default=501)
    sp.set_defaults(func=cmd_oned)

    sp = sub.add_parser("validate", help="mesh diagnostics (never fails)")
    sp.add_argument("--mesh", required=True)
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LinearSolveError, SolverAbort, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
