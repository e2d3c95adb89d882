from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from models.report import PropertyReport


class CheckRequest(BaseModel):
    """Property checks on a kernel given by a source string, explicit rows, or a sequence"""
    source: Optional[str] = Field(None, description="fode:ALPHA,MESHSPEC or file:PATH")
    rows: Optional[List[List[float]]] = Field(None, description="Kernel rows in display order (diagonal last)")
    sequence: Optional[List[float]] = Field(None, description="Uniform-mesh sequence a_0, a_1, ...")
    properties: List[str] = Field(..., min_length=1, description="Property names, e.g. r-cmm, log-convexity")
    tol: Optional[float] = Field(None, gt=0.0, description="Relative tolerance")
    range_n: Optional[int] = Field(None, ge=1, description="Check only the leading rows")
    lambdas: List[float] = Field([0.1, 1.0, 10.0, 100.0], description="Resolvent parameters for resolvent checks")

    @model_validator(mode="after")
    def one_input(self) -> "CheckRequest":
        given = [x is not None for x in (self.source, self.rows, self.sequence)]
        if sum(given) != 1:
            raise ValueError("Provide exactly one of source, rows or sequence")
        return self


class CheckResponse(BaseModel):
    N: int = Field(..., description="Rows of the kernel or length of the sequence")
    reports: List[PropertyReport]
    holds: bool
