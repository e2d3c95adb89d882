"""
Named right-hand sides f(t, u) for the CLI, the HTTP routes and the harness.

    sin1u2     f = sin(1 + u^2)     (the monotonicity example; locally Lipschitz only)
    neg        f = -u
    one        f = 1
    zero       f = 0
    linear:k   f = k u
"""
import logging
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.exceptions import UnknownRightHandSide

logger = logging.getLogger(__name__)


class RightHandSide(BaseModel):
    name: str
    f: Callable[[float, float], float]
    df: Callable[[float, float], float]
    lipschitz: Optional[float] = None
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def _sin1u2(t: float, u: float) -> float:
    return float(np.sin(1.0 + u * u))


def _sin1u2_du(t: float, u: float) -> float:
    return float(2.0 * u * np.cos(1.0 + u * u))


def _linear(k: float) -> RightHandSide:
    return RightHandSide(
        name=f"linear:{k:g}",
        f=lambda t, u: k * u,
        df=lambda t, u: k,
        lipschitz=abs(k),
    )


_REGISTRY = {
    "sin1u2": RightHandSide(name="sin1u2", f=_sin1u2, df=_sin1u2_du),
    "neg": RightHandSide(name="neg", f=lambda t, u: -u, df=lambda t, u: -1.0, lipschitz=1.0),
    "one": RightHandSide(name="one", f=lambda t, u: 1.0, df=lambda t, u: 0.0, lipschitz=0.0),
    "zero": RightHandSide(name="zero", f=lambda t, u: 0.0, df=lambda t, u: 0.0, lipschitz=0.0),
}


def available() -> list[str]:
    return sorted(_REGISTRY) + ["linear:k"]


def get_rhs(name: str) -> RightHandSide:
    key = name.strip().lower()
    if key in _REGISTRY:
        return _REGISTRY[key]
    if key.startswith("linear:"):
        try:
            return _linear(float(key.split(":", 1)[1]))
        except ValueError:
            raise UnknownRightHandSide(f"Bad slope in {name!r}; expected linear:<number>")
    raise UnknownRightHandSide(f"Unknown right-hand side {name!r}; available: {', '.join(available())}")
