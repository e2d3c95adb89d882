import math
from typing import List, Optional

from pydantic import BaseModel, Field

from config import DEFAULT_SEED, MONOTONE_TOL, OUTPUT_DIR, SOLVE_TOL
from models.report import PropertyReport

DEFAULT_MESHES = [
    "geom:0.01,1.2,30",
    "decay:0.1,0.5,0.5,100",
    f"random:0.1,100,{DEFAULT_SEED}",
]

def default_initial_values() -> List[float]:
    """u_0 = 0, 0.1, sqrt(3 pi/2 - 1), sqrt(3 pi/2 - 2)"""
    return [0.0, 0.1, math.sqrt(1.5 * math.pi - 1.0), math.sqrt(1.5 * math.pi - 2.0)]

class ExperimentConfig(BaseModel):
    """Monotonicity experiment for D^alpha u = f(u) with constant initial data on several meshes"""
    alpha: float = Field(0.6, gt=0.0, le=1.0, description="Fractional order")
    meshes: List[str] = Field(default_factory=lambda: list(DEFAULT_MESHES), min_length=1, description="Mesh specs")
    initial_values: List[float] = Field(default_factory=default_initial_values, min_length=1, description="u_0 values")
    steps: Optional[int] = Field(None, ge=1, description="Overrides the step count of every mesh")
    seed: Optional[int] = Field(None, description="Overrides the seed of random meshes; the spec seed is used otherwise")
    f: str = Field("sin1u2", description="Right-hand side name")
    out_dir: str = Field(OUTPUT_DIR, description="Directory for CSV output")
    monotone_tol: float = Field(MONOTONE_TOL, gt=0.0, description="Relative tolerance for monotone and ordering checks")
    solve_tol: float = Field(SOLVE_TOL, gt=0.0, description="Per-step residual tolerance")
    write_files: bool = Field(True, description="Write CSV and plot data per mesh")

class TrajectorySummary(BaseModel):
    u0: float
    direction: str = Field(..., description="constant, nondecreasing, nonincreasing or mixed")
    expected: str = Field(..., description="Direction predicted from the sign of f(u_0)")
    matches_expected: bool
    monotone: PropertyReport
    u_min: float
    u_max: float

class PairOrdering(BaseModel):
    upper: float = Field(..., description="Larger initial value")
    lower: float = Field(..., description="Smaller initial value")
    min_gap: float
    first_crossing: Optional[int] = None
    holds: bool

class MeshResult(BaseModel):
    mesh: str
    N: int
    T: float
    csv_path: Optional[str] = None
    trajectories: List[TrajectorySummary]
    pairs: List[PairOrdering]
    warnings: List[str] = Field(default_factory=list, description="Solvability notes")
    holds: bool


class ExperimentSummary(BaseModel):
    alpha: float
    f: str
    meshes: List[MeshResult]
    holds: bool = Field(..., description="Every trajectory monotone and no ordered pair crosses")
