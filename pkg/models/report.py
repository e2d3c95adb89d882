from typing import Optional

from pydantic import BaseModel, Field, model_validator


class Witness(BaseModel):
    """First violation found by a checker (row-major order)"""
    property: str = Field(..., description="Name of the violated condition")
    indices: tuple[int, ...] = Field(..., description="(n, k) with k the offset, or (n,) / (j,) for vectors")
    lhs: float = Field(..., description="Left-hand side of the violated inequality")
    rhs: float = Field(..., description="Right-hand side of the violated inequality")
    slack: float = Field(..., description="lhs - rhs; negative beyond tolerance when violated")


class PropertyReport(BaseModel):
    """Verdict of a structural check"""
    name: str = Field(..., description="Checked property")
    holds: bool
    witness: Optional[Witness] = None
    tolerance: float = Field(..., description="Absolute tolerance used")
    range_n: Optional[int] = Field(None, description="Rows (or sequence length) covered by the check")
    detail: Optional[str] = Field(None, description="Extra verdict information, e.g. monotone direction")
    warnings: list[str] = Field(default_factory=list, description="Conditioning notes")

    @model_validator(mode="after")
    def witness_iff_failed(self) -> "PropertyReport":
        if self.holds == (self.witness is not None):
            raise ValueError("A witness is present exactly when the property fails")
        return self

    def __bool__(self) -> bool:
        return self.holds

    def to_records(self) -> list[str]:
        """key=value lines for line-oriented output"""
        records = [
            f"property={self.name}",
            f"holds={str(self.holds).lower()}",
            f"tolerance={self.tolerance:.3e}",
        ]
        if self.range_n is not None:
            records.append(f"range={self.range_n}")
        if self.detail:
            records.append(f"detail={self.detail}")
        if self.witness is not None:
            w = self.witness
            records.extend([
                f"witness.property={w.property}",
                f"witness.indices={','.join(str(i) for i in w.indices)}",
                f"witness.lhs={w.lhs:.17g}",
                f"witness.rhs={w.rhs:.17g}",
                f"witness.slack={w.slack:.17g}",
            ])
        for note in self.warnings:
            records.append(f"warning={note}")
        return records

    def summary(self) -> str:
        if self.holds:
            return f"{self.name}: holds (tol={self.tolerance:.1e})"
        w = self.witness
        return (
            f"{self.name}: FAILS at {w.property} {w.indices}: "
            f"lhs={w.lhs:.6g} rhs={w.rhs:.6g} slack={w.slack:.3e} (tol={self.tolerance:.1e})"
        )


class ComparisonReport(BaseModel):
    """Ordering of two solutions driven by h1 >= h2"""
    min_gap: float = Field(..., description="min_n (u1_n - u2_n)")
    first_crossing: Optional[int] = Field(None, description="First n with u1_n - u2_n < -tol")
    holds: bool
    tolerance: float
    constant_difference: bool = Field(..., description="h1 - h2 is constant, so the ordering theorem applies")
    hypothesis: Optional[PropertyReport] = Field(None, description="Resolvent scan of r = gamma - R (*) gamma for varying differences")

    def summary(self) -> str:
        status = "ordered" if self.holds else f"crosses at n={self.first_crossing}"
        return f"comparison: {status}, min gap {self.min_gap:.6g} (tol={self.tolerance:.1e})"
