import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from core.exceptions import InvalidMesh


class Mesh(BaseModel):
    """Time grid 0 = t_0 < t_1 < ... < t_N; steps are tau_n = t_n - t_{n-1}"""
    t: np.ndarray
    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
    )

    @field_validator("t", mode="before")
    @classmethod
    def validate_points(cls, value) -> np.ndarray:
        try:
            points = np.array(value, dtype=float).ravel()
        except (TypeError, ValueError) as e:
            raise InvalidMesh(f"Grid points are not numeric: {str(e)}")
        if points.size < 2:
            raise InvalidMesh("A mesh needs at least t_0 and t_1")
        if not np.all(np.isfinite(points)):
            raise InvalidMesh("Grid points must be finite (t_N overflowed?)")
        if points[0] != 0.0:
            raise InvalidMesh(f"t_0 must be 0, got {points[0]!r}")
        steps = np.diff(points)
        if np.any(steps <= 0.0):
            n = int(np.argmax(steps <= 0.0)) + 1
            raise InvalidMesh(f"Grid points must increase strictly; tau_{n} = {steps[n - 1]!r}")
        points.setflags(write=False)
        return points

    @property
    def tau(self) -> np.ndarray:
        # single subtraction per step, never re-accumulated
        return np.diff(self.t)

    @property
    def N(self) -> int:
        return self.t.size - 1

    @property
    def T(self) -> float:
        return float(self.t[-1])
