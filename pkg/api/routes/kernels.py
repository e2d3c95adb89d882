from fastapi import APIRouter, HTTPException

from core.exceptions import KernelCalculusError
from models.kernel import ArrayKernel
from schemas.check import CheckRequest, CheckResponse
from services.kernel_io import load_kernel_source
from services.kernel_props import run_check
from services.uniform import as_sequence, run_sequence_check

router = APIRouter(prefix="/kernels", tags=["Kernel Properties"])


@router.post("/check", response_model=CheckResponse)
async def check_kernel(request: CheckRequest):
    """Run structural property checks on an array kernel or a uniform-mesh sequence"""
    try:
        if request.sequence is not None:
            sequence = as_sequence(request.sequence)
            reports = [run_sequence_check(name, sequence, request.tol) for name in request.properties]
            size = sequence.size
        else:
            if request.rows is not None:
                kernel = ArrayKernel.from_rows(request.rows)
            else:
                kernel = load_kernel_source(request.source)
            reports = [run_check(name, kernel, request.tol, request.range_n, request.lambdas) for name in request.properties]
            size = kernel.N
        return CheckResponse(N=size, reports=reports, holds=all(r.holds for r in reports))
    except (KernelCalculusError, KeyError, ValueError) as e:
        raise HTTPException(status_code=400, detail=f"Invalid check request: {str(e)}")
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Failed to check kernel: {str(e)}")
