"""
Discrete kernels of the Caputo fractional ODE D^alpha u = f(t, u) written in
integral form, u = u_0 + (1/Gamma(alpha)) int_0^t (t-s)^(alpha-1) f(s, u(s)) ds,
with f frozen at the right end of each step:

    a^n_{n-j} = ((t_n - t_{j-1})^alpha - (t_n - t_j)^alpha) / Gamma(alpha + 1)

Differences t_n - t_j come from the stored grid points, never from re-summed steps.
"""
import logging

import numpy as np
from scipy.special import gamma

from models.fode import FodeKernelSpec
from models.kernel import ArrayKernel

logger = logging.getLogger(__name__)


def gamma_fn(x: float) -> float:
    """Gamma function on x > 0 (scipy's Cephes implementation, ~1e-15 relative)"""
    x = float(x)
    if not np.isfinite(x) or x <= 0.0:
        raise ValueError(f"gamma_fn is defined here for finite x > 0, got {x!r}")
    return float(gamma(x))


def _lower_powers(upper: np.ndarray, lower: np.ndarray, alpha: float) -> np.ndarray:
    """upper^alpha - lower^alpha on the lower triangle, zero above it"""
    mask = np.tril(np.ones(upper.shape, dtype=bool))
    upper = np.where(mask, upper, 0.0)
    lower = np.where(mask, np.maximum(lower, 0.0), 0.0)
    return np.where(mask, upper ** alpha - lower ** alpha, 0.0)


def fode_kernel(spec: FodeKernelSpec) -> ArrayKernel:
    t = spec.mesh.t
    N = spec.mesh.N
    if spec.alpha == 1.0:
        # integrand is 1: each entry is exactly the step
        return ArrayKernel(matrix=np.tril(np.ones((N, N))) * spec.mesh.tau[np.newaxis, :])
    t_n = t[1:, np.newaxis]
    near = t_n - t[np.newaxis, :-1]   # t_n - t_{j-1}
    far = t_n - t[np.newaxis, 1:]     # t_n - t_j
    matrix = _lower_powers(near, far, spec.alpha) / gamma_fn(spec.alpha + 1.0)
    logger.debug(f"FODE kernel alpha={spec.alpha} N={N}")
    return ArrayKernel(matrix=matrix)


def fode_beta_kernel(spec: FodeKernelSpec) -> ArrayKernel:
    """
    beta^n_{n-j} = (t_n - t_{j-1})^alpha - (t_{n-1} - t_{j-1})^alpha, which equals
    Gamma(alpha + 1) * L^{-1} (*) A (*) L for the FODE kernel A.
    """
    t = spec.mesh.t
    N = spec.mesh.N
    if spec.alpha == 1.0:
        return ArrayKernel(matrix=np.tril(np.ones((N, N))) * spec.mesh.tau[:, np.newaxis])
    start = t[np.newaxis, :-1]
    current = t[1:, np.newaxis] - start   # t_n - t_{j-1}
    previous = t[:-1, np.newaxis] - start  # t_{n-1} - t_{j-1}
    return ArrayKernel(matrix=_lower_powers(current, previous, spec.alpha))


def step_size_bound(spec: FodeKernelSpec, M: float) -> tuple[float, bool]:
    """(sup_j a^j_0, M * sup < 1); the diagonal entry is tau_j^alpha / Gamma(alpha + 1)"""
    if M < 0:
        raise ValueError(f"Lipschitz constant must be nonnegative, got {M!r}")
    tau_max = float(np.max(spec.mesh.tau))
    if spec.alpha == 1.0:
        sup = tau_max
    else:
        sup = tau_max ** spec.alpha / gamma_fn(spec.alpha + 1.0)
    return sup, M * sup < 1.0
