from fastapi import APIRouter, HTTPException

from core.exceptions import KernelCalculusError
from models.fode import FodeKernelSpec
from models.trajectory import Problem
from schemas.solve import SolveRequest, SolveResponse
from services.fode import fode_kernel
from services.mesh import assert_resolvable, parse_mesh_spec
from services.rhs_registry import get_rhs
from services.solver import monotonicity_report, solve

router = APIRouter(prefix="/solver", tags=["Volterra Solver"])


@router.post("/solve", response_model=SolveResponse)
async def solve_fode(request: SolveRequest):
    """Solve D^alpha u = f(u) with u(0) = u0 on the requested mesh"""
    try:
        rhs = get_rhs(request.f)
        mesh = assert_resolvable(parse_mesh_spec(request.mesh, steps=request.steps, seed=request.seed))
        kernel = fode_kernel(FodeKernelSpec(alpha=request.alpha, mesh=mesh))
        lipschitz = request.lipschitz if request.lipschitz is not None else rhs.lipschitz
        problem = Problem(kernel=kernel, mesh=mesh, h=request.u0, f=rhs.f, df=rhs.df, f_lipschitz=lipschitz)
        trajectory = solve(problem, tol=request.tol)
        return SolveResponse(
            t=trajectory.t.tolist(),
            u=trajectory.u.tolist(),
            iterations=[d.iterations for d in trajectory.diagnostics],
            residuals=[d.residual for d in trajectory.diagnostics],
            lipschitz=trajectory.lipschitz,
            lipschitz_estimated=trajectory.lipschitz_estimated,
            monotone=monotonicity_report(trajectory),
            warnings=trajectory.warnings,
        )
    except KernelCalculusError as e:
        raise HTTPException(status_code=400, detail=f"Invalid solve request: {str(e)}")
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Failed to solve: {str(e)}")
