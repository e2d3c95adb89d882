from typing import Callable, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.exceptions import ShapeError
from models.kernel import ArrayKernel
from models.mesh import Mesh

Signal = Union[float, np.ndarray, Callable[[float], float]]


class Problem(BaseModel):
    """u_n = h(t_n) + sum_{j<=n} a^n_{n-j} f(t_j, u_j) on a given mesh"""
    kernel: ArrayKernel
    mesh: Mesh
    h: Signal = Field(..., description="Constant, samples h(t_0..t_N), or a function of t")
    f: Callable[[float, float], float]
    df: Optional[Callable[[float, float], float]] = Field(None, description="Partial derivative of f in u")
    f_lipschitz: Optional[float] = Field(None, ge=0.0, description="Lipschitz constant M of f in u")
    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_shapes(self) -> "Problem":
        if self.kernel.N != self.mesh.N:
            raise ShapeError(f"Kernel has {self.kernel.N} rows but the mesh has {self.mesh.N} steps")
        if isinstance(self.h, np.ndarray) and self.h.shape != (self.mesh.N + 1,):
            raise ShapeError(f"Sampled h needs {self.mesh.N + 1} values, got shape {self.h.shape}")
        return self

    def h_values(self) -> np.ndarray:
        """h(t_n) for n = 0..N"""
        if callable(self.h):
            return np.array([self.h(float(t)) for t in self.mesh.t])
        if isinstance(self.h, np.ndarray):
            return self.h.astype(float)
        return np.full(self.mesh.N + 1, float(self.h))


class StepDiagnostics(BaseModel):
    n: int
    iterations: int
    residual: float
    margin: Optional[float] = Field(None, description="1 - M * a^n_0; positive means uniquely solvable")
    converged: bool = Field(True, description="False when the bracket collapsed before |g| reached tol")


class Trajectory(BaseModel):
    t: np.ndarray
    u: np.ndarray
    diagnostics: list[StepDiagnostics] = Field(default_factory=list, description="Steps n = 1..N")
    lipschitz: Optional[float] = None
    lipschitz_estimated: bool = False
    warnings: list[str] = Field(default_factory=list)
    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def N(self) -> int:
        return self.u.size - 1
