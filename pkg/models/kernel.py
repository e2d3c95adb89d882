from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from core.exceptions import ShapeError


class ArrayKernel(BaseModel):
    """
    Lower triangular array kernel (a^n_{n-j}) on a mesh with N steps.

    Stored densely: matrix[n-1, j-1] = a^n_{n-j} for 1 <= j <= n <= N, zero above
    the diagonal. Row n read left to right is a^n_{n-1}, ..., a^n_1, a^n_0, the
    order in which the array is usually displayed; offset k = n - j counts back
    from the diagonal.
    """
    matrix: np.ndarray
    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
    )

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, value) -> np.ndarray:
        matrix = np.array(value, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise ShapeError(f"Kernel storage must be a non-empty square array, got shape {matrix.shape}")
        matrix = np.tril(matrix)
        if not np.all(np.isfinite(matrix)):
            raise ValueError("Kernel entries must be finite")
        matrix.setflags(write=False)
        return matrix

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "ArrayKernel":
        """Build from ragged rows; row n lists its n entries in display order (diagonal last)"""
        size = len(rows)
        matrix = np.zeros((size, size))
        for n, row in enumerate(rows, start=1):
            if len(row) != n:
                raise ShapeError(f"Row {n} must have exactly {n} entries, got {len(row)}")
            matrix[n - 1, :n] = row
        return cls(matrix=matrix)

    @classmethod
    def row_constant(cls, sequence: Sequence[float]) -> "ArrayKernel":
        """Lift a uniform-mesh sequence (a_0, a_1, ...) to the kernel with a^n_k = a_k"""
        from scipy.linalg import toeplitz

        seq = np.asarray(sequence, dtype=float)
        return cls(matrix=toeplitz(seq, np.zeros_like(seq)))

    @property
    def N(self) -> int:
        return self.matrix.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        """a^n_0 for n = 1..N"""
        return np.diag(self.matrix).copy()

    def rows(self) -> list[list[float]]:
        return [self.matrix[n - 1, :n].tolist() for n in range(1, self.N + 1)]

    def offsets(self, n: int) -> np.ndarray:
        """a^n_k for k = 0..n-1 (diagonal first)"""
        return self.matrix[n - 1, :n][::-1].copy()

    def entry(self, n: int, k: int) -> float:
        """a^n_k"""
        if not (1 <= n <= self.N and 0 <= k < n):
            raise IndexError(f"No entry (n={n}, k={k}) in a kernel with {self.N} rows")
        return float(self.matrix[n - 1, n - 1 - k])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix)))

    def truncate(self, range_n: int) -> "ArrayKernel":
        """Leading rows n <= range_n; later rows never influence earlier ones"""
        return ArrayKernel(matrix=self.matrix[:range_n, :range_n])


class DiagonalKernel(BaseModel):
    """Diagonal kernel diag(d_1, ..., d_N), typically the step sizes tau_j"""
    d: np.ndarray
    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
    )

    @field_validator("d", mode="before")
    @classmethod
    def validate_entries(cls, value) -> np.ndarray:
        d = np.array(value, dtype=float).ravel()
        if d.size < 1 or not np.all(np.isfinite(d)) or np.any(d <= 0.0):
            raise ValueError("Diagonal kernel entries must be finite and positive")
        d.setflags(write=False)
        return d

    @property
    def N(self) -> int:
        return self.d.size

    def to_kernel(self) -> ArrayKernel:
        return ArrayKernel(matrix=np.diag(self.d))
