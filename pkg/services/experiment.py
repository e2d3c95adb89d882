"""
Monotonicity experiment: D^alpha u = f(u) with constant initial data u_0, solved on
several meshes. For each mesh every trajectory must be monotone in the direction
of sign f(u_0), and trajectories from ordered initial values must never cross.
"""
import logging
import warnings
from itertools import combinations
from pathlib import Path
from typing import Optional

import numpy as np

from core.exceptions import SolvabilityWarning
from models.fode import FodeKernelSpec
from models.trajectory import Problem, Trajectory
from schemas.experiment import ExperimentConfig, ExperimentSummary, MeshResult, PairOrdering, TrajectorySummary
from services.fode import fode_kernel
from services.kernel_io import write_plotdata, write_series_csv
from services.mesh import assert_resolvable, parse_mesh_spec
from services.rhs_registry import RightHandSide, get_rhs
from services.solver import monotonicity_report, ordering_gap, solve

logger = logging.getLogger(__name__)


def expected_direction(rhs: RightHandSide, u0: float) -> str:
    value = rhs.f(0.0, u0)
    if value > 0:
        return "nondecreasing"
    if value < 0:
        return "nonincreasing"
    return "constant"


def series_name(u0: float) -> str:
    return f"u@u0={u0:.10g}"


def _file_stem(index: int, spec: str) -> str:
    kind = spec.split(":", 1)[0].lower()
    return f"fig1_mesh{index}_{kind}"


def run_mesh(index: int, spec: str, config: ExperimentConfig, rhs: RightHandSide,
             out_dir: Optional[Path]) -> MeshResult:
    mesh = assert_resolvable(parse_mesh_spec(spec, steps=config.steps, seed=config.seed))
    kernel = fode_kernel(FodeKernelSpec(alpha=config.alpha, mesh=mesh))
    logger.info(f"Mesh {spec}: N={mesh.N}, T={mesh.T:.6g}")

    trajectories: dict[float, Trajectory] = {}
    notes = []
    summaries = []
    for u0 in config.initial_values:
        problem = Problem(kernel=kernel, mesh=mesh, h=u0, f=rhs.f, df=rhs.df, f_lipschitz=rhs.lipschitz)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SolvabilityWarning)
            trajectory = solve(problem, tol=config.solve_tol)
        notes.extend(f"u0={u0:.10g}: {w.message}" for w in caught if issubclass(w.category, SolvabilityWarning))
        trajectories[u0] = trajectory

        report = monotonicity_report(trajectory, config.monotone_tol)
        expected = expected_direction(rhs, u0)
        summaries.append(TrajectorySummary(
            u0=u0,
            direction=report.detail,
            expected=expected,
            matches_expected=report.detail in (expected, "constant"),
            monotone=report,
            u_min=float(np.min(trajectory.u)),
            u_max=float(np.max(trajectory.u)),
        ))
        logger.info(f"  u0={u0:.6g}: {report.summary()}, expected {expected}")

    pairs = []
    for lower, upper in combinations(sorted(trajectories), 2):
        min_gap, crossing, _ = ordering_gap(trajectories[upper].u, trajectories[lower].u, config.monotone_tol)
        pairs.append(PairOrdering(upper=upper, lower=lower, min_gap=min_gap, first_crossing=crossing,
                                  holds=crossing is None))
        if crossing is not None:
            logger.warning(f"  u0={upper:.6g} and u0={lower:.6g} cross at n={crossing}")

    csv_path = None
    if out_dir is not None:
        series = {series_name(u0): traj.u for u0, traj in trajectories.items()}
        stem = _file_stem(index, spec)
        csv_path = str(write_series_csv(out_dir / f"{stem}.csv", mesh.t, series))
        write_plotdata(out_dir / f"{stem}.dat", mesh.t, series)

    holds = all(s.monotone.holds and s.matches_expected for s in summaries) and all(p.holds for p in pairs)
    return MeshResult(
        mesh=spec,
        N=mesh.N,
        T=mesh.T,
        csv_path=csv_path,
        trajectories=summaries,
        pairs=pairs,
        warnings=notes,
        holds=holds,
    )


def run_fig1(config: ExperimentConfig) -> ExperimentSummary:
    rhs = get_rhs(config.f)
    out_dir = Path(config.out_dir) if config.write_files else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    logger.info(f"Experiment alpha={config.alpha}, f={rhs.name}, {len(config.initial_values)} initial values")

    results = [run_mesh(index, spec, config, rhs, out_dir) for index, spec in enumerate(config.meshes, start=1)]
    summary = ExperimentSummary(alpha=config.alpha, f=rhs.name, meshes=results, holds=all(r.holds for r in results))

    if out_dir is not None:
        (out_dir / "fig1_summary.json").write_text(summary.model_dump_json(indent=2))
    logger.info(f"Experiment {'passed' if summary.holds else 'FAILED'}")
    return summary


def format_summary(summary: ExperimentSummary) -> list[str]:
    lines = [f"alpha={summary.alpha} f={summary.f}"]
    for result in summary.meshes:
        lines.append(f"mesh {result.mesh}: N={result.N} T={result.T:.6g} {'ok' if result.holds else 'FAILED'}")
        for tr in result.trajectories:
            lines.append(
                f"  u0={tr.u0:.10g} {tr.direction} (expected {tr.expected}) "
                f"range [{tr.u_min:.6g}, {tr.u_max:.6g}]"
            )
        crossings = [p for p in result.pairs if not p.holds]
        lines.append(f"  ordering: {len(result.pairs) - len(crossings)}/{len(result.pairs)} pairs non-crossing")
        for p in crossings:
            lines.append(f"  crossing: u0={p.upper:.6g} vs u0={p.lower:.6g} at n={p.first_crossing}")
        for note in result.warnings:
            lines.append(f"  warning: {note}")
    lines.append(f"result={'pass' if summary.holds else 'fail'}")
    return lines
