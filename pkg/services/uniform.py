"""
Sequence kernels on uniform meshes.

A sequence a = (a_0, ..., a_{N-1}) is the row-constant special case of an array
kernel; pseudo-convolution reduces to the truncated ordinary convolution. The
infinite-sequence properties are checked on the indices present.
"""
import logging
import warnings
from typing import Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from config import CHECK_TOL, POSITIVE_TOL
from core.exceptions import ConditioningWarning, ShapeError, SingularKernel
from models.report import PropertyReport, Witness

logger = logging.getLogger(__name__)


def as_sequence(a: Sequence[float]) -> np.ndarray:
    seq = np.array(a, dtype=float).ravel()
    if seq.size < 1:
        raise ShapeError("A sequence needs at least one entry")
    if not np.all(np.isfinite(seq)):
        raise ValueError("Sequence entries must be finite")
    return seq


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(a))))


def _first(prop: str, violated: np.ndarray, lhs: np.ndarray, rhs: np.ndarray, offset: int = 0) -> Optional[Witness]:
    hits = np.flatnonzero(violated)
    if hits.size == 0:
        return None
    j = int(hits[0])
    return Witness(
        property=prop,
        indices=(j + offset,),
        lhs=float(lhs[j]),
        rhs=float(rhs[j]),
        slack=float(lhs[j] - rhs[j]),
    )


def _report(name: str, tol: float, witnesses: list[Optional[Witness]], size: int,
            detail: Optional[str] = None, notes: Optional[list[str]] = None) -> PropertyReport:
    found = [w for w in witnesses if w is not None]
    witness = min(found, key=lambda w: w.indices) if found else None
    return PropertyReport(
        name=name,
        holds=witness is None,
        witness=witness,
        tolerance=tol,
        range_n=size,
        detail=detail,
        warnings=notes or [],
    )


def conv(a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    """(a*b)_n = sum_{j=0}^n a_{n-j} b_j, truncated to the common length"""
    a, b = as_sequence(a), as_sequence(b)
    if a.size != b.size:
        raise ShapeError(f"Sequences have lengths {a.size} and {b.size}")
    return np.convolve(a, b)[: a.size]


def conv_inverse(a: Sequence[float]) -> np.ndarray:
    """b with a*b = (1, 0, 0, ...); exists iff a_0 != 0"""
    a = as_sequence(a)
    if a[0] == 0.0:
        raise SingularKernel("a_0 is zero; the sequence has no convolution inverse", row=1)
    impulse = np.zeros_like(a)
    impulse[0] = 1.0
    # lfilter with denominator a is forward substitution of a*b = impulse
    return lfilter([1.0], a, impulse)


def complementary_sequence(a: Sequence[float]) -> np.ndarray:
    """a^c with a*a^c = (1, 1, 1, ...), i.e. the partial sums of a^{-1}"""
    return np.cumsum(conv_inverse(a))


def resolvent_sequence(a: Sequence[float], lam: float) -> np.ndarray:
    """r_lambda = delta - (delta + lambda a)^{-1}"""
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam!r}")
    a = as_sequence(a)
    shifted = lam * a
    shifted[0] += 1.0
    r = -conv_inverse(shifted)
    r[0] += 1.0
    return r


def _monotone_witnesses(a: np.ndarray, tol: float, label: str = "a") -> list[Optional[Witness]]:
    zeros = np.zeros_like(a)
    previous = a[:-1]
    return [
        _first(f"{label} nonnegative", a < -tol, a, zeros),
        _first(f"{label} nonincreasing", previous < a[1:] - tol, previous, a[1:], offset=1),
    ]


def _inverse_sign_witnesses(b: np.ndarray, tol: float) -> list[Optional[Witness]]:
    zeros = np.zeros_like(b)
    return [
        _first("b_0 positive", b[:1] <= 0.0, b[:1], zeros[:1]),
        _first("b_j nonpositive", b[1:] > tol, zeros[1:], b[1:], offset=1),
    ]


def is_CMM_uniform(a: Sequence[float], tol: Optional[float] = None) -> PropertyReport:
    """
    a nonnegative, nonincreasing, a_0 > 0 and its convolution inverse has b_0 > 0,
    b_j <= 0. The complementary-sequence form (a^c nonnegative and nonincreasing)
    is evaluated alongside; a disagreement between the two is reported as a
    conditioning note.
    """
    a = as_sequence(a)
    tol = CHECK_TOL if tol is None else tol
    abs_tol = tol * _scale(a)
    pos_tol = POSITIVE_TOL * _scale(a)
    witnesses = _monotone_witnesses(a, abs_tol)
    witnesses.append(_first("a_0 positive", a[:1] <= pos_tol, a[:1], np.full(1, pos_tol)))
    if a[0] == 0.0:
        return _report("CMM-uniform", abs_tol, witnesses, a.size)

    b = conv_inverse(a)
    b_tol = tol * _scale(b)
    sign_witnesses = _inverse_sign_witnesses(b, b_tol)
    inverse_sign = all(w is None for w in sign_witnesses)
    complementary = all(w is None for w in _monotone_witnesses(np.cumsum(b), b_tol, "a^c"))
    report = _report(
        "CMM-uniform",
        max(abs_tol, b_tol),
        witnesses + sign_witnesses,
        a.size,
        detail=f"inverse-sign={str(inverse_sign).lower()} complementary={str(complementary).lower()}",
    )
    monotone = all(w is None for w in witnesses)
    if monotone and inverse_sign != complementary:
        note = "inverse-sign and complementary-sequence verdicts disagree"
        warnings.warn(note, ConditioningWarning)
        logger.warning(note)
        report.warnings.append(note)
    return report


def is_completely_positive_uniform(a: Sequence[float], tol: Optional[float] = None) -> PropertyReport:
    """b_0 > 0, b_j <= 0 for j >= 1 and nonnegative partial sums of b = a^{-1}"""
    a = as_sequence(a)
    tol = CHECK_TOL if tol is None else tol
    b = conv_inverse(a)
    b_tol = tol * _scale(b)
    partial = np.cumsum(b)
    witnesses = _inverse_sign_witnesses(b, b_tol) + [
        _first("partial sums of b nonnegative", partial < -b_tol, partial, np.zeros_like(partial)),
    ]
    return _report("completely-positive-uniform", b_tol, witnesses, a.size)


def is_logconvex_sequence(a: Sequence[float], tol: Optional[float] = None) -> PropertyReport:
    """Nonnegative, nonincreasing and a_{j-1} a_{j+1} >= a_j^2"""
    a = as_sequence(a)
    tol = CHECK_TOL if tol is None else tol
    abs_tol = tol * _scale(a)
    witnesses = _monotone_witnesses(a, abs_tol)
    if a.size >= 3:
        lhs = a[:-2] * a[2:]
        rhs = a[1:-1] ** 2
        witnesses.append(_first("a log-convex", lhs < rhs - tol * _scale(a) ** 2, lhs, rhs, offset=1))
    return _report("log-convex", abs_tol, witnesses, a.size)


def is_CM_sequence(v: Sequence[float], tol: Optional[float] = None) -> PropertyReport:
    """
    ((I - E)^j v)_k >= 0 for all j + k <= N - 1, E the shift (Ev)_k = v_{k+1}.
    Level j carries up to 2^j amplified rounding, so its allowance grows with j.
    """
    v = as_sequence(v)
    tol = CHECK_TOL if tol is None else tol
    abs_tol = tol * _scale(v)
    size_v = float(np.max(np.abs(v)))
    eps = np.finfo(float).eps
    level = v.copy()
    for j in range(v.size):
        allowance = abs_tol + 2.0 ** (j + 1) * eps * size_v
        hits = np.flatnonzero(level < -allowance)
        if hits.size:
            k = int(hits[0])
            witness = Witness(
                property="finite differences nonnegative",
                indices=(j, k),
                lhs=float(level[k]),
                rhs=0.0,
                slack=float(level[k]),
            )
            return _report("CM-sequence", abs_tol, [witness], v.size)
        level = level[:-1] - level[1:]
    return _report("CM-sequence", abs_tol, [], v.size)


SEQUENCE_CHECKS = {
    "cmm": is_CMM_uniform,
    "cmm-uniform": is_CMM_uniform,
    "log-convex": is_logconvex_sequence,
    "cm-sequence": is_CM_sequence,
    "completely-positive": is_completely_positive_uniform,
}


def run_sequence_check(name: str, a: Sequence[float], tol: Optional[float] = None) -> PropertyReport:
    key = name.lower()
    if key not in SEQUENCE_CHECKS:
        raise KeyError(f"Unknown sequence property {name!r}; known: {', '.join(sorted(SEQUENCE_CHECKS))}")
    return SEQUENCE_CHECKS[key](a, tol)
