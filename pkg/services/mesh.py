"""
Mesh generators, mesh spec parsing and the one-step-per-line mesh file format.

Random meshes draw from numpy's PCG64 bit generator seeded with the given
64-bit integer; draws below REJECT_BELOW are discarded and redrawn so that no
step collapses to zero.
"""
import logging
import os
from typing import Optional

import numpy as np

from config import MIN_RELATIVE_STEP
from core.exceptions import InvalidMesh, SpecParseError
from models.mesh import Mesh

logger = logging.getLogger(__name__)

REJECT_BELOW = 1e-12


def _require_count(N: int) -> int:
    if int(N) != N or N < 1:
        raise InvalidMesh(f"Step count must be a positive integer, got {N!r}")
    return int(N)


def _require_positive(name: str, value: float) -> float:
    if not (np.isfinite(value) and value > 0.0):
        raise InvalidMesh(f"{name} must be positive and finite, got {value!r}")
    return float(value)


def mesh_from_steps(tau) -> Mesh:
    """Mesh with t_0 = 0 and the given step sizes"""
    steps = np.asarray(tau, dtype=float).ravel()
    if steps.size < 1:
        raise InvalidMesh("At least one step is required")
    if np.any(~np.isfinite(steps)) or np.any(steps <= 0.0):
        raise InvalidMesh("Step sizes must be positive and finite")
    return Mesh(t=np.concatenate(([0.0], np.cumsum(steps))))


def mesh_uniform(N: int, T: float) -> Mesh:
    """t_n = n T / N"""
    N = _require_count(N)
    T = _require_positive("T", T)
    return Mesh(t=np.arange(N + 1) * T / N)


def mesh_geometric(tau1: float, ratio: float, N: int) -> Mesh:
    """tau_j = tau1 * ratio^(j-1); t_n is the geometric partial sum evaluated directly"""
    N = _require_count(N)
    tau1 = _require_positive("tau1", tau1)
    ratio = _require_positive("ratio", ratio)
    n = np.arange(N + 1, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        if ratio == 1.0:
            t = tau1 * n
        else:
            log_r = np.log(ratio)
            t = tau1 * np.expm1(n * log_r) / np.expm1(log_r)
    if not np.all(np.isfinite(t)):
        raise InvalidMesh(f"t_N overflows for tau1={tau1}, ratio={ratio}, N={N}")
    return Mesh(t=t)


def mesh_algebraic_decay(c: float, b: float, p: float, N: int, first_step: Optional[float] = None) -> Mesh:
    """tau_j = c (1 + b j)^(-p) for j >= 1; first_step replaces tau_1 when given"""
    N = _require_count(N)
    c = _require_positive("c", c)
    if not (np.isfinite(b) and b >= 0.0):
        raise InvalidMesh(f"b must be nonnegative, got {b!r}")
    if not (np.isfinite(p) and p >= 0.0):
        raise InvalidMesh(f"p must be nonnegative, got {p!r}")
    j = np.arange(1, N + 1, dtype=float)
    tau = c * (1.0 + b * j) ** (-p)
    if first_step is not None:
        tau[0] = _require_positive("first_step", first_step)
    return mesh_from_steps(tau)


def mesh_random(scale: float, N: int, seed: int) -> Mesh:
    """tau_j = scale * u_j with u_j i.i.d. uniform on (0, 1)"""
    N = _require_count(N)
    scale = _require_positive("scale", scale)
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    u = rng.random(N)
    rejected = u < REJECT_BELOW
    while np.any(rejected):
        u[rejected] = rng.random(int(rejected.sum()))
        rejected = u < REJECT_BELOW
    return mesh_from_steps(scale * u)


def mesh_alternating(tau1: float, ratio: float, N: int) -> Mesh:
    """Steps alternate tau1, tau1*ratio, tau1, ... (step ratios ratio and 1/ratio)"""
    N = _require_count(N)
    tau1 = _require_positive("tau1", tau1)
    ratio = _require_positive("ratio", ratio)
    tau = np.where(np.arange(N) % 2 == 0, tau1, tau1 * ratio)
    return mesh_from_steps(tau)


def load_mesh_file(path: str) -> Mesh:
    """Read one step size per line; blank lines and '#' comments are skipped"""
    if not os.path.exists(path):
        raise SpecParseError(f"Mesh file not found: {path}")
    steps = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                value = float(text)
            except ValueError:
                raise SpecParseError(f"{path}:{lineno}: not a number: {text!r}")
            if not (np.isfinite(value) and value > 0.0):
                raise InvalidMesh(f"{path}:{lineno}: step size must be positive, got {value!r}")
            steps.append(value)
    return mesh_from_steps(steps)


def save_mesh_file(mesh: Mesh, path: str) -> str:
    with open(path, "w", encoding="utf-8") as f:
        for step in mesh.tau:
            f.write(f"{step:.17g}\n")
    return path


def _numbers(kind: str, body: str, count: tuple[int, ...]) -> list[float]:
    parts = [p.strip() for p in body.split(",") if p.strip()]
    if len(parts) not in count:
        raise SpecParseError(f"'{kind}' mesh spec expects {' or '.join(map(str, count))} values, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as e:
        raise SpecParseError(f"Bad number in '{kind}' mesh spec: {str(e)}")


def _count(value: float, kind: str) -> int:
    if value != int(value):
        raise SpecParseError(f"Step count in '{kind}' mesh spec must be an integer, got {value}")
    return int(value)


def parse_mesh_spec(spec: str, steps: Optional[int] = None, seed: Optional[int] = None) -> Mesh:
    """
    Build a mesh from a spec string:

        uniform:N,T   geom:tau1,ratio,N   decay:c,b,p,N[,tau1]
        random:scale,N,seed   alt:tau1,ratio,N   file:PATH

    steps overrides N and seed overrides the random seed when given.
    """
    kind, sep, body = spec.strip().partition(":")
    kind = kind.lower()
    if not sep:
        raise SpecParseError(f"Mesh spec must look like kind:params, got {spec!r}")

    if kind == "file":
        return load_mesh_file(body)
    if kind == "uniform":
        N, T = _numbers(kind, body, (2,))
        return mesh_uniform(steps or _count(N, kind), T)
    if kind == "geom":
        tau1, ratio, N = _numbers(kind, body, (3,))
        return mesh_geometric(tau1, ratio, steps or _count(N, kind))
    if kind == "decay":
        values = _numbers(kind, body, (4, 5))
        c, b, p, N = values[:4]
        first_step = values[4] if len(values) == 5 else None
        return mesh_algebraic_decay(c, b, p, steps or _count(N, kind), first_step=first_step)
    if kind == "random":
        scale, N, spec_seed = _numbers(kind, body, (3,))
        return mesh_random(scale, steps or _count(N, kind), seed if seed is not None else _count(spec_seed, kind))
    if kind == "alt":
        tau1, ratio, N = _numbers(kind, body, (3,))
        return mesh_alternating(tau1, ratio, steps or _count(N, kind))
    raise SpecParseError(f"Unknown mesh kind {kind!r}; expected uniform, geom, decay, random, alt or file")


def assert_resolvable(mesh: Mesh, min_relative_step: float = MIN_RELATIVE_STEP) -> Mesh:
    """Reject meshes whose smallest step is below min_relative_step * T"""
    smallest = float(np.min(mesh.tau))
    if smallest < min_relative_step * mesh.T:
        raise InvalidMesh(
            f"Step {smallest:.3e} is below {min_relative_step:.0e} * T = {min_relative_step * mesh.T:.3e}"
        )
    logger.debug(f"Mesh accepted: N={mesh.N}, T={mesh.T:.6g}, min tau={smallest:.3e}")
    return mesh
