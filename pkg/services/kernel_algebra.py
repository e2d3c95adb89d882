"""
Pseudo-convolution calculus on lower triangular array kernels.

With the dense storage M[n-1, j-1] = a^n_{n-j}, the pseudo-convolution

    c^n_{n-k} = sum_{j=k}^{n} a^n_{n-j} b^j_{j-k}

is the product of two lower triangular matrices, and the inverse kernel is
obtained by forward substitution.
"""
import logging
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from config import ALGEBRA_TOL, RESOLVENT_TOL
from core.exceptions import ShapeError, SingularKernel
from models.kernel import ArrayKernel, DiagonalKernel

logger = logging.getLogger(__name__)


def _same_size(A: ArrayKernel, B: ArrayKernel) -> None:
    if A.N != B.N:
        raise ShapeError(f"Kernels have {A.N} and {B.N} rows")


def pconv(A: ArrayKernel, B: ArrayKernel) -> ArrayKernel:
    """A (*) B"""
    _same_size(A, B)
    return ArrayKernel(matrix=A.matrix @ B.matrix)


def pconv_vec(A: ArrayKernel, x: Sequence[float]) -> np.ndarray:
    """y_n = sum_{j=1}^{n} a^n_{n-j} x_j"""
    x = np.asarray(x, dtype=float)
    if x.shape != (A.N,):
        raise ShapeError(f"Vector of length {A.N} expected, got shape {x.shape}")
    return A.matrix @ x


def identity_kernel(N: int) -> ArrayKernel:
    return ArrayKernel(matrix=np.eye(N))


def ones_kernel(N: int) -> ArrayKernel:
    return ArrayKernel(matrix=np.tril(np.ones((N, N))))


def ones_inverse_kernel(N: int) -> ArrayKernel:
    return ArrayKernel(matrix=np.eye(N) - np.eye(N, k=-1))


def special_kernels(N: int) -> tuple[ArrayKernel, ArrayKernel, ArrayKernel]:
    """(I, L, L^{-1}): identity, all ones, and its inverse (1 on the diagonal, -1 below)"""
    if N < 1:
        raise ShapeError(f"N must be at least 1, got {N}")
    return identity_kernel(N), ones_kernel(N), ones_inverse_kernel(N)


def pinv(A: ArrayKernel) -> ArrayKernel:
    """
    Inverse kernel B with B (*) A = A (*) B = I.

    Each row of B follows from forward substitution,
        b^n_0 = 1 / a^n_0,
        b^n_{n-k} = -(1 / a^k_0) sum_{j=k+1}^{n} b^n_{n-j} a^j_{j-k},
    which is what the triangular solve below carries out column by column.
    """
    diagonal = A.diagonal
    zero = np.flatnonzero(diagonal == 0.0)
    if zero.size:
        n = int(zero[0]) + 1
        raise SingularKernel(f"Diagonal entry a^{n}_0 is zero; the kernel has no inverse", row=n)
    inverse = solve_triangular(A.matrix, np.eye(A.N), lower=True, check_finite=False)
    return ArrayKernel(matrix=inverse)


def right_complementary(A: ArrayKernel) -> ArrayKernel:
    """C_R with A (*) C_R = L, i.e. C_R = A^{-1} (*) L"""
    return pconv(pinv(A), ones_kernel(A.N))


def left_complementary(A: ArrayKernel) -> ArrayKernel:
    """C_L with C_L (*) A = L, i.e. C_L = L (*) A^{-1}"""
    return pconv(ones_kernel(A.N), pinv(A))


def conjugate_by_L(A: ArrayKernel) -> ArrayKernel:
    """L^{-1} (*) A (*) L"""
    _, L, L_inv = special_kernels(A.N)
    return pconv(pconv(L_inv, A), L)


def resolvent(A: ArrayKernel, lam: float) -> ArrayKernel:
    """R_lambda solving R + lambda R (*) A = lambda A, computed as I - (I + lambda A)^{-1}"""
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam!r}")
    if np.any(A.diagonal == 0.0):
        n = int(np.flatnonzero(A.diagonal == 0.0)[0]) + 1
        raise SingularKernel(f"Diagonal entry a^{n}_0 is zero; the resolvent is not defined", row=n)
    shifted = ArrayKernel(matrix=np.eye(A.N) + lam * A.matrix)
    return ArrayKernel(matrix=np.eye(A.N) - pinv(shifted).matrix)


def scale_right(A: ArrayKernel, tau: DiagonalKernel) -> ArrayKernel:
    """A (*) diag(d): entry a^n_{n-j} becomes a^n_{n-j} d_j"""
    if tau.N != A.N:
        raise ShapeError(f"Kernel has {A.N} rows but the diagonal has {tau.N} entries")
    return ArrayKernel(matrix=A.matrix * tau.d[np.newaxis, :])


def identity_residual(A: ArrayKernel, B: ArrayKernel) -> float:
    """max |(A (*) B - I)| scaled by the row magnitudes of the product terms"""
    product = pconv(A, B)
    scale = np.abs(A.matrix) @ np.abs(B.matrix)
    row_scale = np.maximum(1.0, scale.max(axis=1))
    return float(np.max(np.abs(product.matrix - np.eye(A.N)) / row_scale[:, np.newaxis]))


def resolvent_residual(A: ArrayKernel, R: ArrayKernel, lam: float) -> float:
    """max |R + lambda R (*) A - lambda A| relative to max(1, lambda max|A|)"""
    defect = R.matrix + lam * (R.matrix @ A.matrix) - lam * A.matrix
    return float(np.max(np.abs(defect))) / max(1.0, lam * A.max_abs())


def verify_inverse(A: ArrayKernel, B: ArrayKernel, tol: float = ALGEBRA_TOL) -> bool:
    left = identity_residual(B, A)
    right = identity_residual(A, B)
    if max(left, right) > tol:
        logger.warning(f"Inverse residual {max(left, right):.3e} exceeds {tol:.1e}")
        return False
    return True


def verify_resolvent(A: ArrayKernel, R: ArrayKernel, lam: float, tol: float = RESOLVENT_TOL) -> bool:
    residual = resolvent_residual(A, R, lam)
    if residual > tol:
        logger.warning(f"Resolvent residual {residual:.3e} exceeds {tol:.1e} at lambda={lam}")
        return False
    return True
