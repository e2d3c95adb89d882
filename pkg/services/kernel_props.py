"""
Structural property checks for array kernels.

Every checker returns a PropertyReport carrying the first violation in
row-major (n, k) order, with k the offset from the diagonal (a^n_k). Inequalities
are tested against an absolute tolerance tol * max(1, max|K|) where K is the
kernel whose entries are compared; strict positivity uses POSITIVE_TOL on the
same scale. Checks run on the leading range_n rows when a range is given, which
is the "local" version of each property.
"""
import logging
import warnings
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from config import CHECK_TOL, POSITIVE_TOL
from core.exceptions import ConditioningWarning, SingularKernel
from models.kernel import ArrayKernel
from models.report import PropertyReport, Witness
from services.kernel_algebra import (
    conjugate_by_L,
    left_complementary,
    pinv,
    resolvent,
    right_complementary,
)

logger = logging.getLogger(__name__)

Candidate = tuple[tuple[int, int], Witness]
Lambdas = Union[float, Sequence[float]]


def _scale(K: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(K)))) if K.size else 1.0


def _abs_tol(K: np.ndarray, tol: Optional[float]) -> float:
    return (CHECK_TOL if tol is None else tol) * _scale(K)


def _pos_tol(K: np.ndarray) -> float:
    return POSITIVE_TOL * _scale(K)


def _restrict(A: ArrayKernel, range_n: Optional[int]) -> ArrayKernel:
    if range_n is None or range_n >= A.N:
        return A
    if range_n < 1:
        raise ValueError(f"range_n must be at least 1, got {range_n}")
    return A.truncate(range_n)


def _lambda_list(lam: Lambdas) -> list[float]:
    if isinstance(lam, Iterable):
        return [float(x) for x in lam]
    return [float(lam)]


def _first(prop: str, violated: np.ndarray, lhs: np.ndarray, rhs: np.ndarray,
           column_index: bool = False) -> Optional[Candidate]:
    """
    First violated entry of a matrix-coordinate mask, in (n, k) order.
    With column_index the witness reports (n, j) instead of the offset.
    """
    hits = np.argwhere(violated)
    if hits.size == 0:
        return None
    i = int(hits[:, 0].min())
    cols = hits[hits[:, 0] == i, 1]
    c = int(cols.min()) if column_index else int(cols.max())
    key = (i + 1, c + 1) if column_index else (i + 1, i - c)
    witness = Witness(
        property=prop,
        indices=key,
        lhs=float(lhs[i, c]),
        rhs=float(rhs[i, c]),
        slack=float(lhs[i, c] - rhs[i, c]),
    )
    return key, witness


def _report(name: str, tol: float, candidates: Iterable[Optional[Candidate]],
            range_n: Optional[int] = None, notes: Optional[list[str]] = None,
            detail: Optional[str] = None) -> PropertyReport:
    found = [c for c in candidates if c is not None]
    witness = min(found, key=lambda c: c[0])[1] if found else None
    return PropertyReport(
        name=name,
        holds=witness is None,
        witness=witness,
        tolerance=tol,
        range_n=range_n,
        detail=detail,
        warnings=notes or [],
    )


def _singular(prop: str, error: SingularKernel) -> Candidate:
    n = error.row or 1
    witness = Witness(property=f"{prop} invertible", indices=(n, 0), lhs=0.0, rhs=0.0, slack=0.0)
    return (0, 0), witness


def _lower(N: int, k: int = 0) -> np.ndarray:
    return np.tril(np.ones((N, N), dtype=bool), k)


def _nonnegative(M: np.ndarray, tol: float, prop: str) -> Optional[Candidate]:
    zeros = np.zeros_like(M)
    return _first(f"{prop} nonnegative", _lower(M.shape[0]) & (M < -tol), M, zeros)


def _positive(M: np.ndarray, pos_tol: float, prop: str) -> Optional[Candidate]:
    bound = np.full_like(M, pos_tol)
    return _first(f"{prop} positive", _lower(M.shape[0]) & (M <= pos_tol), M, bound)


def _column_violations(M: np.ndarray, tol: float, prop: str) -> list[Optional[Candidate]]:
    # a^{n-1}_{k-1} >= a^n_k: same column, previous row
    above = np.zeros_like(M)
    above[1:] = M[:-1]
    mask = _lower(M.shape[0], -1) & (above < M - tol)
    return [_nonnegative(M, tol, prop), _first(f"{prop} column monotone", mask, above, M)]


def _row_violations(M: np.ndarray, tol: float, prop: str) -> list[Optional[Candidate]]:
    # a^n_{k-1} >= a^n_k: one column closer to the diagonal, same row
    inner = np.zeros_like(M)
    inner[:, :-1] = M[:, 1:]
    mask = _lower(M.shape[0], -1) & (inner < M - tol)
    return [_nonnegative(M, tol, prop), _first(f"{prop} row monotone", mask, inner, M)]


def _sign_violations(B: np.ndarray, tol: float, pos_tol: float, prop: str) -> list[Optional[Candidate]]:
    N = B.shape[0]
    diagonal = np.eye(N, dtype=bool)
    bound = np.full_like(B, pos_tol)
    zeros = np.zeros_like(B)
    return [
        _first(f"{prop} diagonal positive", diagonal & (B <= pos_tol), B, bound),
        _first(f"{prop} off-diagonal nonpositive", _lower(N, -1) & (B > tol), zeros, B),
    ]


def _logconv_violations(M: np.ndarray, tol: float, prop: str) -> list[Optional[Candidate]]:
    """
    a~^{n-1}_{j-1} a~^n_{j+1} >= a~^n_j a~^{n-1}_j with offsets j. At matrix position
    (i, c) holding a~^n_j (n = i+1, j = i-c) the four entries are M[i-1, c], M[i, c-1],
    M[i, c] and M[i-1, c-1]; valid for 1 <= c <= i-1.
    """
    N = M.shape[0]
    lhs = np.zeros_like(M)
    rhs = np.zeros_like(M)
    lhs[1:, 1:] = M[:-1, 1:] * M[1:, :-1]
    rhs[1:, 1:] = M[1:, 1:] * M[:-1, :-1]
    valid = _lower(N, -1)
    valid[:, 0] = False
    return [_first(f"{prop} log-convexity", valid & (lhs < rhs - tol), lhs, rhs)]


def _tail_sums(M: np.ndarray) -> np.ndarray:
    """S[i, c] = sum_{c' >= c} M[i, c'], i.e. M (*) L"""
    return np.cumsum(M[:, ::-1], axis=1)[:, ::-1]


def is_column_monotone(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    A = _restrict(A, range_n)
    abs_tol = _abs_tol(A.matrix, tol)
    return _report("column-monotone", abs_tol, _column_violations(A.matrix, abs_tol, "A"), A.N)


def is_row_monotone(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    A = _restrict(A, range_n)
    abs_tol = _abs_tol(A.matrix, tol)
    return _report("row-monotone", abs_tol, _row_violations(A.matrix, abs_tol, "A"), A.N)


def is_doubly_monotone(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    A = _restrict(A, range_n)
    abs_tol = _abs_tol(A.matrix, tol)
    candidates = _column_violations(A.matrix, abs_tol, "A") + _row_violations(A.matrix, abs_tol, "A")
    return _report("doubly-monotone", abs_tol, candidates, A.N)


def inverse_sign_pattern(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    """
    B = A^{-1} has b^n_0 > 0, b^n_{n-j} <= 0 off the diagonal and nonnegative row
    sums; equivalent to complete positivity of A.
    """
    A = _restrict(A, range_n)
    try:
        B = pinv(A).matrix
    except SingularKernel as e:
        return _report("inverse-sign-pattern", _abs_tol(A.matrix, tol), [_singular("A", e)], A.N)
    abs_tol = _abs_tol(B, tol)
    sums = B.sum(axis=1)
    row_sums = np.zeros_like(B)
    np.fill_diagonal(row_sums, sums)
    zeros = np.zeros_like(B)
    sum_violation = np.eye(A.N, dtype=bool) & (row_sums < -abs_tol)
    candidates = _sign_violations(B, abs_tol, _pos_tol(B), "A^-1") + [
        _first("A^-1 row sum nonnegative", sum_violation, row_sums, zeros),
    ]
    return _report("inverse-sign-pattern", abs_tol, candidates, A.N)


def _theorem_c_verdict(A: ArrayKernel, tol: Optional[float]) -> bool:
    """Column monotone A with A^{-1} and (L^{-1} (*) A (*) L)^{-1} both M-pattern signed"""
    M = A.matrix
    if any(_column_violations(M, _abs_tol(M, tol), "A")):
        return False
    try:
        for K in (pinv(A).matrix, pinv(conjugate_by_L(A)).matrix):
            if any(_sign_violations(K, _abs_tol(K, tol), _pos_tol(K), "K")):
                return False
    except SingularKernel:
        return False
    return True


def is_R_CMM(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    """Column monotone A whose right complementary kernel C_R is doubly monotone"""
    A = _restrict(A, range_n)
    abs_tol = _abs_tol(A.matrix, tol)
    candidates = _column_violations(A.matrix, abs_tol, "A")
    try:
        C = right_complementary(A).matrix
    except SingularKernel as e:
        return _report("R-CMM", abs_tol, [_singular("A", e)], A.N)
    c_tol = _abs_tol(C, tol)
    candidates += _column_violations(C, c_tol, "C_R") + _row_violations(C, c_tol, "C_R")
    report = _report("R-CMM", max(abs_tol, c_tol), candidates, A.N)

    cross_check = _theorem_c_verdict(A, tol)
    if cross_check != report.holds:
        note = (
            f"complementary-kernel verdict ({report.holds}) and inverse-sign verdict "
            f"({cross_check}) disagree; the kernel is badly conditioned at this tolerance"
        )
        warnings.warn(note, ConditioningWarning)
        logger.warning(note)
        report.warnings.append(note)
    return report


def is_L_CMM(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    """Row monotone A whose left complementary kernel C_L is doubly monotone"""
    A = _restrict(A, range_n)
    abs_tol = _abs_tol(A.matrix, tol)
    candidates = _row_violations(A.matrix, abs_tol, "A")
    try:
        C = left_complementary(A).matrix
    except SingularKernel as e:
        return _report("L-CMM", abs_tol, [_singular("A", e)], A.N)
    c_tol = _abs_tol(C, tol)
    candidates += _column_violations(C, c_tol, "C_L") + _row_violations(C, c_tol, "C_L")
    return _report("L-CMM", max(abs_tol, c_tol), candidates, A.N)


def is_CMM(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    """Doubly monotone A that is both R-CMM and L-CMM"""
    parts = [is_doubly_monotone(A, tol, range_n), is_R_CMM(A, tol, range_n), is_L_CMM(A, tol, range_n)]
    candidates = [(p.witness.indices[:2], p.witness) for p in parts if not p.holds]
    notes = [note for p in parts for note in p.warnings]
    return _report("CMM", max(p.tolerance for p in parts), candidates, parts[0].range_n, notes)


def log_convexity_condition(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    """Positive entries with a~^{n-1}_{j-1} a~^n_{j+1} >= a~^n_j a~^{n-1}_j"""
    A = _restrict(A, range_n)
    M = A.matrix
    # products carry the square of the entry scale
    abs_tol = (CHECK_TOL if tol is None else tol) * _scale(M) ** 2
    candidates = [_positive(M, _pos_tol(M), "A")] + _logconv_violations(M, abs_tol, "A")
    return _report("log-convexity", abs_tol, candidates, A.N)


def sufficient_R_CMM(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    """
    Sufficient test for R-CMM: A column monotone, and both A and L^{-1} (*) A (*) L
    positive and log-convex.
    """
    A = _restrict(A, range_n)
    abs_tol = _abs_tol(A.matrix, tol)
    conjugate = conjugate_by_L(A)
    candidates = list(_column_violations(A.matrix, abs_tol, "A"))
    for label, K in (("A", A), ("L^-1*A*L", conjugate)):
        M = K.matrix
        product_tol = (CHECK_TOL if tol is None else tol) * _scale(M) ** 2
        candidates.append(_positive(M, _pos_tol(M), label))
        candidates.extend(_logconv_violations(M, product_tol, label))
    return _report("sufficient-R-CMM", abs_tol, candidates, A.N)


def necessary_rccmon(A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None) -> PropertyReport:
    """
    sum_{j=k}^{n+1} a^{n+1}_{n+1-j} >= sum_{j=k}^{n} a^n_{n-j} for 1 <= k <= n-1.
    Witness indices are (n+1, k) with k the column index j.
    """
    A = _restrict(A, range_n)
    S = _tail_sums(A.matrix)
    abs_tol = _abs_tol(S, tol)
    above = np.zeros_like(S)
    above[1:] = S[:-1]
    mask = _lower(A.N, -2) & (S < above - abs_tol)
    candidates = [_first("tail sums nondecreasing in n", mask, S, above, column_index=True)]
    return _report("necessary-rccmon", abs_tol, candidates, A.N)


def resolvent_rowsum_inequality(A: ArrayKernel, lam: Lambdas, tol: Optional[float] = None,
                                range_n: Optional[int] = None) -> PropertyReport:
    """
    sum_{j=k}^{n} (R_lambda)^n_{n-j} >= sum_{j=k}^{n-1} (R_lambda)^{n-1}_{n-1-j}
    for 1 <= k <= n-1, for every lambda given.
    """
    A = _restrict(A, range_n)
    candidates = []
    abs_tol = _abs_tol(A.matrix, tol)
    for value in _lambda_list(lam):
        S = _tail_sums(resolvent(A, value).matrix)
        s_tol = _abs_tol(S, tol)
        abs_tol = max(abs_tol, s_tol)
        above = np.zeros_like(S)
        above[1:] = S[:-1]
        mask = _lower(A.N, -1) & (S < above - s_tol)
        candidates.append(_first(f"R_lambda tail sums (lambda={value:g})", mask, S, above, column_index=True))
        if candidates[-1] is not None:
            break
    return _report("resolvent-rowsum", abs_tol, candidates, A.N)


def resolvent_nonneg(A: ArrayKernel, lam: Lambdas, tol: Optional[float] = None,
                     range_n: Optional[int] = None) -> PropertyReport:
    """Resolvents of A and of L^{-1} (*) A (*) L have nonnegative entries"""
    A = _restrict(A, range_n)
    conjugate = conjugate_by_L(A)
    candidates = []
    abs_tol = _abs_tol(A.matrix, tol)
    for value in _lambda_list(lam):
        for label, K in (("R_lambda(A)", A), ("R_lambda(L^-1*A*L)", conjugate)):
            R = resolvent(K, value).matrix
            r_tol = _abs_tol(R, tol)
            abs_tol = max(abs_tol, r_tol)
            candidates.append(_nonnegative(R, r_tol, f"{label} (lambda={value:g})"))
        if any(candidates):
            break
    return _report("resolvent-nonneg", abs_tol, candidates, A.N)


def is_completely_positive(A: ArrayKernel, lam: Lambdas, tol: Optional[float] = None,
                           range_n: Optional[int] = None) -> PropertyReport:
    """0 < (R_lambda)^n_0 < 1, entries >= 0 and row sums <= 1 for every lambda given"""
    A = _restrict(A, range_n)
    candidates = []
    abs_tol = _abs_tol(A.matrix, tol)
    ones = np.ones((A.N, A.N))
    for value in _lambda_list(lam):
        R = resolvent(A, value).matrix
        r_tol = _abs_tol(R, tol)
        abs_tol = max(abs_tol, r_tol)
        diagonal = np.eye(A.N, dtype=bool)
        sums = np.zeros_like(R)
        np.fill_diagonal(sums, R.sum(axis=1))
        label = f"lambda={value:g}"
        candidates += [
            _positive(np.where(diagonal, R, 1.0), _pos_tol(R), f"R diagonal ({label})"),
            _first(f"R diagonal below one ({label})", diagonal & (R >= 1.0), ones, R),
            _nonnegative(R, r_tol, f"R ({label})"),
            _first(f"R row sum at most one ({label})", diagonal & (sums > 1.0 + r_tol), ones, sums),
        ]
        if any(candidates):
            break
    return _report("completely-positive", abs_tol, candidates, A.N)


def column_monotone_via_cr_inverse(A: ArrayKernel, tol: Optional[float] = None,
                                   range_n: Optional[int] = None) -> PropertyReport:
    """a^n_j nonincreasing in n  <=>  C_R^{-1} = L^{-1} (*) A has nonpositive off-diagonals"""
    A = _restrict(A, range_n)
    D = A.matrix.copy()
    D[1:] -= A.matrix[:-1]
    abs_tol = _abs_tol(A.matrix, tol)
    zeros = np.zeros_like(D)
    mask = _lower(A.N, -1) & (D > abs_tol)
    candidates = [_first("C_R^-1 off-diagonal nonpositive", mask, zeros, D)]
    return _report("column-monotone-via-C_R-inverse", abs_tol, candidates, A.N)


PROPERTY_CHECKS = {
    "column-monotone": is_column_monotone,
    "row-monotone": is_row_monotone,
    "doubly-monotone": is_doubly_monotone,
    "inverse-sign-pattern": inverse_sign_pattern,
    "r-cmm": is_R_CMM,
    "l-cmm": is_L_CMM,
    "cmm": is_CMM,
    "log-convexity": log_convexity_condition,
    "sufficient-r-cmm": sufficient_R_CMM,
    "necessary-rccmon": necessary_rccmon,
}

RESOLVENT_CHECKS = {
    "resolvent-rowsum": resolvent_rowsum_inequality,
    "resolvent-nonneg": resolvent_nonneg,
    "completely-positive": is_completely_positive,
}


def run_check(name: str, A: ArrayKernel, tol: Optional[float] = None, range_n: Optional[int] = None,
              lambdas: Sequence[float] = (0.1, 1.0, 10.0, 100.0)) -> PropertyReport:
    """Dispatch a check by its CLI/API name"""
    key = name.lower()
    if key in PROPERTY_CHECKS:
        return PROPERTY_CHECKS[key](A, tol, range_n)
    if key in RESOLVENT_CHECKS:
        return RESOLVENT_CHECKS[key](A, list(lambdas), tol, range_n)
    raise KeyError(f"Unknown property {name!r}; known: {', '.join(sorted(PROPERTY_CHECKS) + sorted(RESOLVENT_CHECKS))}")
