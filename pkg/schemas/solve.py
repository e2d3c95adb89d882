from typing import List, Optional

from pydantic import BaseModel, Field

from config import SOLVE_TOL
from models.report import PropertyReport


class SolveRequest(BaseModel):
    """FODE solve D^alpha u = f(u), u(0) = u0, on a mesh spec"""
    alpha: float = Field(..., gt=0.0, le=1.0, description="Fractional order")
    mesh: str = Field(..., description="Mesh spec, e.g. uniform:100,1")
    u0: float = Field(0.0, description="Initial value (constant h)")
    f: str = Field("sin1u2", description="Right-hand side name")
    steps: Optional[int] = Field(None, ge=1, description="Overrides the mesh step count")
    seed: Optional[int] = Field(None, description="Overrides the random mesh seed")
    tol: float = Field(SOLVE_TOL, gt=0.0, description="Per-step residual tolerance")
    lipschitz: Optional[float] = Field(None, ge=0.0, description="Known Lipschitz constant of f")


class SolveResponse(BaseModel):
    t: List[float]
    u: List[float]
    iterations: List[int] = Field(..., description="Scalar solve iterations for n = 1..N")
    residuals: List[float]
    lipschitz: Optional[float] = None
    lipschitz_estimated: bool
    monotone: PropertyReport
    warnings: List[str] = Field(default_factory=list)
