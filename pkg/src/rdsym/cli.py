"""Command-line front end.

    rdsym simulate --config paper_eq8 --out runs/ --plot
    rdsym exact --case 1 --a 1 --b -1 --k1 1 --t-start 0.1 --t-end 0.5
    rdsym verify all --seed 42
    rdsym reduce --system eq12 --phi1 1
    rdsym convergence

Exit codes: 0 success, 1 config error, 2 runtime/domain error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .config import exact_spec_from, load_config, simulation_from
from .errors import BlowUpError, ConfigError, DomainError, RDSymError
from .exact_solutions import CaseTag, ExactSolutionSpec, eval_exact, singular_times
from .io import write_snapshots, write_table
from .ode_core import (
    cubic_reduced_system,
    derived_lie_reduced_system,
    integrate_rk4,
    printed_lie_reduced_system,
    sd_matched_initial_state,
    trajectory_energy,
)
from .pde_solver import FieldState, Grid1D, convergence_study, default_dt_rule, simulate
from .symmetry import LieReductionParams
from .verification import SUITES, format_report, run_suites

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_VERIFY = 0, 1, 2, 3


def _common(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=d, help="config file path or builtin name")
    parser.add_argument("--out", default=d if suppress else ".", help="output directory")
    parser.add_argument("--plot", action="store_true", default=d if suppress else False,
                        help="also write SVG plots")
    parser.add_argument("--seed", type=int, default=d if suppress else 42,
                        help="seed for randomized sampling")


def build_parser():
    parser = argparse.ArgumentParser(prog="rdsym", description=__doc__.split("\n")[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)

    sub.add_parser("simulate", parents=[common], help="run a configured simulation")

    p = sub.add_parser("exact", parents=[common], help="tabulate a closed-form solution")
    p.add_argument("--case", choices=["1", "2"])
    for name in ("a", "b", "k1", "C1", "C2", "x-min", "x-max", "t-start", "t-end"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--nx", type=int)
    p.add_argument("--nt", type=int, help="number of output times (default 5)")

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("suite", nargs="?", default="all", choices=list(SUITES) + ["all"])

    p = sub.add_parser("reduce", parents=[common], help="integrate a reduced ODE system")
    p.add_argument("--system", default="eq12", choices=["eq12", "eq7-printed", "eq7-derived"])
    for name, default in (("phi1", 1.0), ("phi2", 0.0), ("nu", 1.0), ("alpha", 1.0), ("beta", 1.0),
                          ("lam", 1.0), ("a", 1.0), ("b", 1.0), ("h", 1e-3)):
        p.add_argument(f"--{name}", type=float, default=default)
    p.add_argument("--ln-sign", type=int, default=-1, choices=[-1, 1])
    p.add_argument("--z-start", type=float)
    p.add_argument("--z-end", type=float)
    p.add_argument("--y0", help="comma-separated initial state w1,w1',w2,w2'")

    p = sub.add_parser("convergence", parents=[common], help="grid-refinement study")
    p.add_argument("--grids", default="51,101,201")
    for name, default in (("a", 1.0), ("b", -1.0), ("k1", 1.0)):
        p.add_argument(f"--{name}", type=float, default=default)
    return parser


def _header(meta):
    lines = []
    if meta.get("name"):
        lines.append(f"config: {meta['name']}")
    if meta.get("note"):
        lines.append(f"note: {meta['note']}")
    return lines


def cmd_simulate(args):
    if not args.config:
        raise ConfigError("simulate needs --config", field="--config")
    cfg = simulation_from(load_config(args.config))
    out = Path(args.out)
    csv_path = out / cfg.metadata["csv"]
    comments = _header(cfg.metadata)
    try:
        snaps = simulate(cfg)
    except BlowUpError as exc:
        comments.append(f"blow-up at t={exc.time!r}")
        write_snapshots(csv_path, getattr(exc, "snapshots", []), cfg.grid.x, comments)
        if args.plot and getattr(exc, "snapshots", None):
            _plot(exc.snapshots, cfg.grid.x, out, cfg.metadata)
        print(f"blow-up at t={exc.time!r}; partial snapshots in {csv_path}", file=sys.stderr)
        return EXIT_RUNTIME
    write_snapshots(csv_path, snaps, cfg.grid.x, comments)
    print(f"wrote {csv_path}")
    if args.plot:
        for p in _plot(snaps, cfg.grid.x, out, cfg.metadata):
            print(f"wrote {p}")
    return EXIT_OK


def _plot(snaps, x, out, meta):
    from .plotting import plot_fields

    prefix = f"{meta['name']}_" if meta.get("name") else ""
    return plot_fields(snaps, x, out, prefix)


def _exact_spec(args, raw):
    if raw is not None and raw.has("exact"):
        spec = exact_spec_from(raw)
    else:
        spec = ExactSolutionSpec(CaseTag.EllipticPair, a=1.0, b=-1.0, k1=1.0)
    overrides = {k: getattr(args, k) for k in ("a", "b", "k1", "C1", "C2") if getattr(args, k) is not None}
    case = spec.case_tag
    if args.case is not None:
        case = CaseTag.EllipticPair if args.case == "1" else CaseTag.EllipticPlusLinear
    fields = dict(a=spec.a, b=spec.b, k1=spec.k1, C1=spec.C1, C2=spec.C2)
    if case is CaseTag.EllipticPlusLinear and args.case == "2" and "b" not in overrides:
        fields["b"] = 0.0
    fields.update(overrides)
    try:
        return ExactSolutionSpec(case, **fields)
    except DomainError as exc:
        raise ConfigError(str(exc), field="exact") from None


def cmd_exact(args):
    raw = load_config(args.config) if args.config else None

    def pick(flag, section, key, default, kind=float):
        v = getattr(args, flag)
        if v is not None:
            return kind(v)
        if raw is not None and raw.has(section, key):
            return raw.number(section, key, kind=kind)
        return default

    spec = _exact_spec(args, raw)
    grid = Grid1D(pick("x_min", "grid", "x_min", 0.0), pick("x_max", "grid", "x_max", 1.0),
                  pick("nx", "grid", "nx", 11, int))
    t0 = pick("t_start", "time", "t0", 0.1)
    t1 = pick("t_end", "time", "t_end", 0.5)
    nt = args.nt if args.nt is not None else 5
    if nt < 1 or t1 < t0:
        raise ConfigError("need nt >= 1 and t_end >= t_start", field="--nt")
    curves = singular_times(spec, (grid.x_min, grid.x_max), (t0, t1))
    if curves:
        listing = "; ".join(c.describe() for c in curves)
        print(f"pole-of-ds: window meets singular curve(s) {listing}", file=sys.stderr)
        return EXIT_RUNTIME
    times = np.linspace(t0, t1, nt) if nt > 1 else np.array([t0])
    snaps = [FieldState(float(t), *map(np.asarray, eval_exact(grid.x, float(t), spec))) for t in times]
    snaps = [FieldState(s.t, np.broadcast_to(s.U, grid.x.shape), np.broadcast_to(s.V, grid.x.shape)) for s in snaps]
    name = f"exact_case{1 if spec.case_tag is CaseTag.EllipticPair else 2}"
    comments = [f"exact: {spec.case_tag.value} a={spec.a!r} b={spec.b!r} k1={spec.k1!r} C1={spec.C1!r} C2={spec.C2!r}"]
    path = write_snapshots(Path(args.out) / f"{name}.csv", snaps, grid.x, comments)
    print(f"wrote {path}")
    if args.plot:
        for p in _plot(snaps, grid.x, Path(args.out), {"name": name}):
            print(f"wrote {p}")
    return EXIT_OK


def cmd_verify(args):
    checks = run_suites(args.suite, args.seed)
    report = format_report(checks)
    sys.stdout.write(report)
    out = Path(args.out)
    write_table(
        out / f"verify_{args.suite}.csv",
        ("suite", "check", "value", "tolerance", "status", "detail"),
        ((c.suite, c.name, f"{c.value:.6e}", c.tolerance, c.status, c.detail) for c in checks),
        comments=[f"seed: {args.seed}"],
    )
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


def cmd_reduce(args):
    if args.system == "eq12":
        system = cubic_reduced_system(args.phi1, args.phi2)
        default_span, default_y0 = (0.0, 3.0), sd_matched_initial_state(args.phi1) if args.phi1 > 0 else np.array([0.0, 1.0, 0.0, 0.0])
    else:
        p = LieReductionParams(args.nu, args.alpha, args.beta, args.lam, args.a, args.b,
                               args.phi1, args.phi2, ln_sign=args.ln_sign)
        build = printed_lie_reduced_system if args.system == "eq7-printed" else derived_lie_reduced_system
        system = build(p)
        default_span, default_y0 = (0.5, 5.0), np.array([0.2, 0.1, 0.1, -0.05])
    span = (args.z_start if args.z_start is not None else default_span[0],
            args.z_end if args.z_end is not None else default_span[1])
    if args.y0:
        try:
            y0 = np.array([float(v) for v in args.y0.split(",")])
        except ValueError:
            raise ConfigError(f"bad --y0 {args.y0!r}", field="--y0") from None
        if y0.shape != (4,):
            raise ConfigError("--y0 needs 4 comma-separated values", field="--y0")
    else:
        y0 = default_y0
    tr = integrate_rk4(system, y0, span, args.h)
    header = ["z", "y1", "y2", "y3", "y4"]
    rows = [[z, *y] for z, y in zip(tr.z_values, tr.states)]
    if args.system == "eq12":
        header.append("energy")
        for row, e in zip(rows, trajectory_energy(tr, args.phi1, args.phi2)):
            row.append(e)
    path = write_table(Path(args.out) / f"reduce_{args.system}.csv", header, rows,
                       comments=[f"system: {system.label.value}"])
    print(f"wrote {path}")
    return EXIT_OK


def cmd_convergence(args):
    try:
        grids = [int(g) for g in args.grids.split(",")]
    except ValueError:
        raise ConfigError(f"bad --grids {args.grids!r}", field="--grids") from None
    spec = ExactSolutionSpec(CaseTag.EllipticPair, a=args.a, b=args.b, k1=args.k1)
    rows = convergence_study(spec, grids, default_dt_rule)
    path = write_table(
        Path(args.out) / "convergence.csv",
        ("nx", "dx", "dt", "max_error", "observed_order"),
        ((r.nx, r.dx, r.dt, r.max_error, r.observed_order) for r in rows),
    )
    for r in rows:
        order = "" if r.observed_order is None else f"{r.observed_order:.4f}"
        print(f"nx={r.nx:5d}  max_error={r.max_error:.6e}  order={order}")
    print(f"wrote {path}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "exact": cmd_exact,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
    "convergence": cmd_convergence,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, RDSymError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
