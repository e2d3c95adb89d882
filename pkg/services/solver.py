"""
Implicit stepping of u_n = h(t_n) + sum_{j=1}^n a^n_{n-j} f(t_j, u_j).

Step n forms the history c_n = h(t_n) + sum_{j<n} a^n_{n-j} f(t_j, u_j) once, then
solves g(u) = u - a^n_0 f(t_n, u) - c_n = 0 with Newton's method kept inside a
sign-change bracket grown around u_{n-1}. When M a^n_0 < 1, g is strictly
increasing and the root is unique.
"""
import logging
import warnings
from typing import Callable, Optional, Sequence

import numpy as np

from config import BRACKET_MAX_DOUBLINGS, CHECK_TOL, MONOTONE_TOL, SOLVE_MAX_ITER, SOLVE_TOL
from core.exceptions import NonConvergence, ShapeError, SingularKernel, SolvabilityWarning
from models.kernel import ArrayKernel
from models.report import ComparisonReport, PropertyReport, Witness
from models.trajectory import Problem, Signal, StepDiagnostics, Trajectory
from services.kernel_algebra import resolvent

logger = logging.getLogger(__name__)

LIPSCHITZ_SAMPLES = 65


def _converged(g_value: float, u: float, tol: float) -> bool:
    return abs(g_value) <= tol * max(1.0, abs(u))


def _bracket(g: Callable[[float], float], guess: float, g_guess: float, max_doublings: int, n: int) -> tuple[float, float]:
    """Smallest symmetric interval around guess (width doubled each try) with a sign change"""
    width = max(1e-8, abs(guess))
    for _ in range(max_doublings):
        lo, hi = guess - width, guess + width
        g_lo, g_hi = g(lo), g(hi)
        if np.sign(g_lo) * np.sign(g_guess) <= 0:
            return lo, guess
        if np.sign(g_hi) * np.sign(g_guess) <= 0:
            return guess, hi
        width *= 2.0
    raise NonConvergence(f"No sign change of the step equation within {max_doublings} bracket doublings", step=n)


def scalar_solve(g: Callable[[float], float], dg: Callable[[float], float], guess: float, n: int = 0,
                 tol: float = SOLVE_TOL, max_iter: int = SOLVE_MAX_ITER,
                 max_doublings: int = BRACKET_MAX_DOUBLINGS) -> tuple[float, int, float]:
    """
    Root of g near guess: (u, iterations, |g(u)|). Newton steps leaving the bracket,
    or with a zero slope, are replaced by bisection.
    """
    g_x = g(guess)
    if _converged(g_x, guess, tol):
        return guess, 0, abs(g_x)
    lo, hi = _bracket(g, guess, g_x, max_doublings, n)
    g_lo = g(lo)
    x = guess
    best_x, best_g = x, g_x
    for iteration in range(1, max_iter + 1):
        slope = dg(x)
        step_ok = slope != 0.0 and np.isfinite(slope)
        x_new = x - g_x / slope if step_ok else lo
        if not step_ok or not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        x = x_new
        g_x = g(x)
        if abs(g_x) <= abs(best_g):
            best_x, best_g = x, g_x
        if _converged(g_x, x, tol):
            return x, iteration, abs(g_x)
        if np.sign(g_x) == np.sign(g_lo):
            lo, g_lo = x, g_x
        else:
            hi = x
        # bracket exhausted at floating-point resolution
        if hi - lo <= 4.0 * np.spacing(max(abs(lo), abs(hi))):
            if _converged(best_g, best_x, tol):
                logger.debug(f"step {n}: bracket collapsed with |g|={abs(best_g):.3e}")
            else:
                logger.warning(f"step {n}: bracket collapsed at u={best_x:.17g} with |g|={abs(best_g):.3e} above tol")
            return best_x, iteration, abs(best_g)
    raise NonConvergence(f"Step {n}: scalar solve did not converge in {max_iter} iterations", step=n, iterations=max_iter)


def estimate_lipschitz(f: Callable[[float, float], float], t: float, lo: float, hi: float,
                       df: Optional[Callable[[float, float], float]] = None,
                       samples: int = LIPSCHITZ_SAMPLES) -> float:
    """max |df/du| sampled on [lo, hi] at time t; difference quotients when df is not given"""
    grid = np.linspace(lo, hi, samples) if hi > lo else np.array([lo])
    if df is not None:
        return float(max(abs(df(t, float(u))) for u in grid))
    if grid.size < 2:
        step = 1e-6 * max(1.0, abs(lo))
        grid = np.array([lo - step, lo + step])
    values = np.array([f(t, float(u)) for u in grid])
    return float(np.max(np.abs(np.diff(values) / np.diff(grid))))


def _inflated_range(u: np.ndarray, predicted: float) -> tuple[float, float]:
    """Range of u and the predicted next value, widened by 50% of its span"""
    lo, hi = min(float(np.min(u)), predicted), max(float(np.max(u)), predicted)
    span = hi - lo
    pad = 0.25 * span if span > 0 else np.sqrt(np.finfo(float).eps) * max(1.0, abs(lo))
    return lo - pad, hi + pad


def solve(problem: Problem, tol: float = SOLVE_TOL, max_iter: int = SOLVE_MAX_ITER,
          max_doublings: int = BRACKET_MAX_DOUBLINGS) -> Trajectory:
    A = problem.kernel.matrix
    t = problem.mesh.t
    N = problem.mesh.N
    diagonal = np.diag(A)
    if np.any(diagonal <= 0.0):
        n = int(np.argmax(diagonal <= 0.0)) + 1
        raise SingularKernel(f"Solver needs positive diagonal entries; a^{n}_0 = {diagonal[n - 1]!r}", row=n)

    f, df = problem.f, problem.df
    h = problem.h_values()
    u = np.empty(N + 1)
    fu = np.empty(N + 1)
    u[0] = h[0]
    fu[0] = f(float(t[0]), float(u[0]))

    lipschitz = problem.f_lipschitz
    estimated = lipschitz is None
    running_m = 0.0
    diagnostics = []
    unsafe_steps = []

    for n in range(1, N + 1):
        t_n = float(t[n])
        a0 = float(diagonal[n - 1])
        history = h[n] + float(np.dot(A[n - 1, : n - 1], fu[1:n]))

        if estimated:
            # explicit predictor u ~ c_n + a^n_0 f(t_n, u_{n-1})
            lo, hi = _inflated_range(u[:n], history + a0 * f(t_n, float(u[n - 1])))
            running_m = max(running_m, estimate_lipschitz(f, t_n, lo, hi, df))
            m = running_m
        else:
            m = lipschitz
        margin = 1.0 - m * a0
        if margin <= 0.0:
            unsafe_steps.append(n)

        def g(x: float) -> float:
            return x - a0 * f(t_n, x) - history

        if df is not None:
            def dg(x: float) -> float:
                return 1.0 - a0 * df(t_n, x)
        else:
            def dg(x: float) -> float:
                step = 1.5e-8 * max(1.0, abs(x))
                return (g(x + step) - g(x - step)) / (2.0 * step)

        u[n], iterations, residual = scalar_solve(g, dg, float(u[n - 1]), n, tol, max_iter, max_doublings)
        fu[n] = f(t_n, float(u[n]))
        diagnostics.append(StepDiagnostics(n=n, iterations=iterations, residual=residual, margin=margin,
                                           converged=_converged(residual, float(u[n]), tol)))
        logger.debug(f"step {n}: t={t_n:.6g} u={u[n]:.17g} iters={iterations} residual={residual:.3e} margin={margin:.3e}")

    notes = []
    if unsafe_steps:
        kind = "estimated" if estimated else "given"
        note = (
            f"M * a^n_0 >= 1 at {len(unsafe_steps)} step(s), first n={unsafe_steps[0]} "
            f"({kind} M={(running_m if estimated else lipschitz):.6g}); unique solvability is not guaranteed"
        )
        warnings.warn(note, SolvabilityWarning)
        logger.warning(note)
        notes.append(note)

    return Trajectory(
        t=np.array(t),
        u=u,
        diagnostics=diagnostics,
        lipschitz=running_m if estimated else lipschitz,
        lipschitz_estimated=estimated,
        warnings=notes,
    )


def trajectory_defect(problem: Problem, trajectory: Trajectory) -> float:
    """max_n |u_n - h(t_n) - (A (*) f(u))_n| over n = 1..N"""
    if trajectory.N != problem.mesh.N:
        raise ShapeError(f"Trajectory has {trajectory.N} steps but the problem has {problem.mesh.N}")
    t = problem.mesh.t
    fu = np.array([problem.f(float(t_n), float(u_n)) for t_n, u_n in zip(t[1:], trajectory.u[1:])])
    defect = trajectory.u[1:] - problem.h_values()[1:] - problem.kernel.matrix @ fu
    return float(np.max(np.abs(defect)))


def monotonicity_report(trajectory: Trajectory, tol: float = MONOTONE_TOL) -> PropertyReport:
    """
    Whether u_0..u_N is monotone. v_n = u_{n+1} - u_n; tol is relative to max|u|.
    The detail names the direction: constant, nondecreasing or nonincreasing.
    """
    u = trajectory.u
    scale = float(np.max(np.abs(u))) or 1.0
    abs_tol = tol * scale
    v = np.diff(u)
    up = bool(np.all(v >= -abs_tol))
    down = bool(np.all(v <= abs_tol))
    if up and down:
        direction = "constant"
    elif up:
        direction = "nondecreasing"
    elif down:
        direction = "nonincreasing"
    else:
        direction = None

    witness = None
    if direction is None:
        # direction fixed by the first clearly nonzero increment
        first = int(np.argmax(np.abs(v) > abs_tol))
        rising = v[first] > 0
        bad = (v < -abs_tol) if rising else (v > abs_tol)
        n = int(np.argmax(bad))
        witness = Witness(
            property=f"increments {'nonnegative' if rising else 'nonpositive'}",
            indices=(n,),
            lhs=float(v[n]),
            rhs=0.0,
            slack=float(v[n]) if rising else -float(v[n]),
        )
    return PropertyReport(
        name="monotone",
        holds=witness is None,
        witness=witness,
        tolerance=abs_tol,
        range_n=trajectory.N,
        detail=direction or "mixed",
    )


def resolvent_hypothesis_scan(A: ArrayKernel, gamma: Sequence[float], lambdas: Sequence[float],
                              tol: float = CHECK_TOL) -> PropertyReport:
    """Samples r = gamma - R_lambda (*) gamma >= 0 over the lambdas given; gamma indexed n = 1..N"""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (A.N,):
        raise ShapeError(f"gamma needs {A.N} values, got shape {gamma.shape}")
    abs_tol = tol * max(1.0, float(np.max(np.abs(gamma))))
    witness = None
    for lam in lambdas:
        r = gamma - resolvent(A, float(lam)).matrix @ gamma
        bad = np.flatnonzero(r < -abs_tol)
        if bad.size:
            n = int(bad[0])
            witness = Witness(
                property=f"gamma - R_lambda*gamma nonnegative (lambda={lam:g})",
                indices=(n + 1,),
                lhs=float(r[n]),
                rhs=0.0,
                slack=float(r[n]),
            )
            break
    return PropertyReport(
        name="resolvent-hypothesis",
        holds=witness is None,
        witness=witness,
        tolerance=abs_tol,
        range_n=A.N,
    )


def ordering_gap(upper: np.ndarray, lower: np.ndarray, tol: float = MONOTONE_TOL) -> tuple[float, Optional[int], float]:
    """(min_n (upper_n - lower_n), first n with a gap below -tol, absolute tol); tol relative to max|u|"""
    scale = max(float(np.max(np.abs(upper))), float(np.max(np.abs(lower)))) or 1.0
    abs_tol = tol * scale
    gap = upper - lower
    below = np.flatnonzero(gap < -abs_tol)
    return float(np.min(gap)), (int(below[0]) if below.size else None), abs_tol


def _samples(problem: Problem, h: Signal) -> np.ndarray:
    return problem.model_copy(update={"h": h}).h_values()


def compare_solutions(problem: Problem, h1: Signal, h2: Signal, tol: float = MONOTONE_TOL,
                      lambdas: Sequence[float] = (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0),
                      **solve_options) -> tuple[Trajectory, Trajectory, ComparisonReport]:
    """
    Solve with h1 and with h2 and report min_n (u1_n - u2_n). The ordering
    theorem is asserted only for a constant difference h1 - h2; otherwise the
    resolvent hypothesis is sampled and reported for information.
    """
    s1, s2 = _samples(problem, h1), _samples(problem, h2)
    first = solve(problem.model_copy(update={"h": s1}), **solve_options)
    second = solve(problem.model_copy(update={"h": s2}), **solve_options)

    min_gap, crossing, abs_tol = ordering_gap(first.u, second.u, tol)
    difference = s1 - s2
    constant = bool(np.all(difference == difference[0]))
    hypothesis = None
    if not constant:
        hypothesis = resolvent_hypothesis_scan(problem.kernel, difference[1:], lambdas)
        logger.info(f"h1 - h2 is not constant; resolvent hypothesis sample: {hypothesis.summary()}")
    report = ComparisonReport(
        min_gap=min_gap,
        first_crossing=crossing,
        holds=crossing is None,
        tolerance=abs_tol,
        constant_difference=constant,
        hypothesis=hypothesis,
    )
    return first, second, report
