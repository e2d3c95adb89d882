from fastapi import APIRouter, HTTPException

from core.exceptions import KernelCalculusError
from schemas.experiment import ExperimentConfig, ExperimentSummary
from services.experiment import run_fig1

router = APIRouter(prefix="/experiments", tags=["Experiments"])


@router.post("/fig1", response_model=ExperimentSummary)
async def run_monotonicity_experiment(config: ExperimentConfig):
    """Run the monotonicity and non-crossing experiment; files are written only when write_files is set"""
    try:
        return run_fig1(config)
    except KernelCalculusError as e:
        raise HTTPException(status_code=400, detail=f"Invalid experiment: {str(e)}")
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Experiment failed: {str(e)}")
