from pydantic import BaseModel, ConfigDict, Field

from models.mesh import Mesh


class FodeKernelSpec(BaseModel):
    """Caputo derivative order alpha and the mesh the kernel lives on"""
    alpha: float = Field(..., gt=0.0, le=1.0, description="Fractional order in (0, 1]")
    mesh: Mesh
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
