"""
Command-line front end.

    python cli.py check fode:0.6,geom:0.01,1.2,30 --prop r-cmm
    python cli.py check file:seq.txt --uniform --prop cmm
    python cli.py solve --f one --alpha 0.5 --mesh uniform:10,1 --u0 0 --out u.csv
    python cli.py experiment fig1 --out results
    python cli.py plotdata results/fig1_mesh1_geom.csv --out fig1.dat
    python cli.py kernel fode:0.6,decay:0.1,0.5,0.5,100 --out A.csv

Exit codes: 0 all checks or assertions hold, 1 a check or assertion fails, 2 bad input.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from config import OUTPUT_DIR, SOLVE_TOL
from core.exceptions import KernelCalculusError
from core.log_config import setup_logging
from models.fode import FodeKernelSpec
from models.trajectory import Problem
from schemas.experiment import ExperimentConfig
from services.experiment import format_summary, run_fig1
from services.fode import fode_kernel
from services.kernel_io import (
    load_kernel_source,
    read_sequence,
    read_series_csv,
    write_kernel_csv,
    write_plotdata,
    write_trajectory_csv,
)
from services.kernel_props import run_check
from services.mesh import assert_resolvable, parse_mesh_spec
from services.rhs_registry import get_rhs
from services.solver import monotonicity_report, solve
from services.uniform import run_sequence_check

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def cmd_check(args: argparse.Namespace) -> int:
    properties = args.prop or (["cmm"] if args.uniform else ["r-cmm"])
    if args.uniform:
        path = args.source[5:] if args.source.startswith("file:") else args.source
        sequence = read_sequence(path)
        reports = [run_sequence_check(name, sequence, args.tol) for name in properties]
    else:
        kernel = load_kernel_source(args.source, steps=args.steps, seed=args.seed)
        lambdas = args.lam or [0.1, 1.0, 10.0, 100.0]
        reports = [run_check(name, kernel, args.tol, args.range, lambdas) for name in properties]
    for report in reports:
        print("\n".join(report.to_records()))
        print()
        logger.info(report.summary())
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAILED


def cmd_solve(args: argparse.Namespace) -> int:
    if args.u0 and len(args.u0) > 1:
        raise KernelCalculusError(f"solve takes one --u0, got {len(args.u0)}; use the experiment command for several")
    rhs = get_rhs(args.f)
    mesh = assert_resolvable(parse_mesh_spec(args.mesh, steps=args.steps, seed=args.seed))
    kernel = fode_kernel(FodeKernelSpec(alpha=args.alpha, mesh=mesh))
    lipschitz = args.lipschitz if args.lipschitz is not None else rhs.lipschitz
    u0 = args.u0[0] if args.u0 else 0.0
    problem = Problem(kernel=kernel, mesh=mesh, h=u0, f=rhs.f, df=rhs.df, f_lipschitz=lipschitz)
    trajectory = solve(problem, tol=args.solve_tol)
    out = Path(args.out) if args.out else Path(OUTPUT_DIR) / "trajectory.csv"
    if out.suffix != ".csv":
        out = out / "trajectory.csv"
    write_trajectory_csv(trajectory, out)
    print(monotonicity_report(trajectory).summary())
    print(f"wrote {out}")
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    if args.name != "fig1":
        raise KernelCalculusError(f"Unknown experiment {args.name!r}; available: fig1")
    overrides = {
        "alpha": args.alpha,
        "meshes": args.mesh,
        "initial_values": args.u0,
        "steps": args.steps,
        "seed": args.seed,
        "f": args.f,
        "out_dir": args.out,
        "monotone_tol": args.tol,
    }
    config = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    summary = run_fig1(config)
    print("\n".join(format_summary(summary)))
    return EXIT_OK if summary.holds else EXIT_FAILED


def cmd_plotdata(args: argparse.Namespace) -> int:
    t, series = read_series_csv(args.input)
    out = Path(args.out) if args.out else Path(args.input).with_suffix(".dat")
    write_plotdata(out, t, series)
    print(f"wrote {len(series)} series to {out}")
    return EXIT_OK


def cmd_kernel(args: argparse.Namespace) -> int:
    kernel = load_kernel_source(args.source, steps=args.steps, seed=args.seed)
    out = Path(args.out) if args.out else Path(OUTPUT_DIR) / "kernel.csv"
    write_kernel_csv(kernel, out)
    print(f"wrote {kernel.N} rows to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Array-kernel calculus for Volterra equations on nonuniform meshes")
    parser.add_argument("--log-level", default=None, help="Logging level (default from LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    def mesh_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--steps", type=int, default=None, help="Override the mesh step count")
        p.add_argument("--seed", type=int, default=None, help="Override the random mesh seed")

    check = sub.add_parser("check", help="Check structural properties of a kernel or sequence")
    check.add_argument("source", help="fode:ALPHA,MESHSPEC or file:PATH (a sequence file with --uniform)")
    check.add_argument("--uniform", action="store_true", help="Treat the source as a uniform-mesh sequence")
    check.add_argument("--prop", action="append", help="Property name; repeatable")
    check.add_argument("--tol", type=float, default=None, help="Relative tolerance")
    check.add_argument("--range", type=int, default=None, help="Check only the leading rows")
    check.add_argument("--lambda", dest="lam", type=float, action="append", help="Resolvent parameter; repeatable")
    mesh_options(check)
    check.set_defaults(handler=cmd_check)

    solve_p = sub.add_parser("solve", help="Solve D^alpha u = f(u) and write the trajectory CSV")
    solve_p.add_argument("--alpha", type=float, required=True)
    solve_p.add_argument("--mesh", required=True, help="Mesh spec, e.g. uniform:100,1")
    solve_p.add_argument("--u0", type=float, action="append", help="Initial value (default 0); given at most once")
    solve_p.add_argument("--f", default="sin1u2", help="Right-hand side name")
    solve_p.add_argument("--tol", dest="solve_tol", type=float, default=SOLVE_TOL, help="Per-step residual tolerance")
    solve_p.add_argument("--lipschitz", type=float, default=None, help="Known Lipschitz constant of f")
    solve_p.add_argument("--out", default=None, help="Output CSV file or directory")
    mesh_options(solve_p)
    solve_p.set_defaults(handler=cmd_solve)

    experiment = sub.add_parser("experiment", help="Run a named experiment")
    experiment.add_argument("name", help="Experiment name (fig1)")
    experiment.add_argument("--alpha", type=float, default=None)
    experiment.add_argument("--mesh", action="append", default=None, help="Mesh spec; repeatable")
    experiment.add_argument("--u0", type=float, action="append", default=None, help="Initial value; repeatable")
    experiment.add_argument("--f", default=None, help="Right-hand side name")
    experiment.add_argument("--tol", type=float, default=None, help="Relative monotone/ordering tolerance")
    experiment.add_argument("--out", default=None, help="Output directory")
    mesh_options(experiment)
    experiment.set_defaults(handler=cmd_experiment)

    plot = sub.add_parser("plotdata", help="Convert a trajectory or series CSV into gnuplot blocks")
    plot.add_argument("input")
    plot.add_argument("--out", default=None)
    plot.set_defaults(handler=cmd_plotdata)

    kernel = sub.add_parser("kernel", help="Write a kernel CSV")
    kernel.add_argument("source", help="fode:ALPHA,MESHSPEC or file:PATH")
    kernel.add_argument("--out", default=None)
    mesh_options(kernel)
    kernel.set_defaults(handler=cmd_kernel)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except (KernelCalculusError, ValidationError, KeyError, ValueError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
