import numpy as np
import pytest

from conftest import fode_instances
from models.fode import FodeKernelSpec
from models.kernel import ArrayKernel, DiagonalKernel
from services.fode import fode_beta_kernel, fode_kernel
from services.kernel_algebra import pinv, scale_right, special_kernels
from services.kernel_props import (
    column_monotone_via_cr_inverse,
    inverse_sign_pattern,
    is_CMM,
    is_column_monotone,
    is_completely_positive,
    is_doubly_monotone,
    is_L_CMM,
    is_R_CMM,
    is_row_monotone,
    log_convexity_condition,
    necessary_rccmon,
    resolvent_nonneg,
    resolvent_rowsum_inequality,
    run_check,
    sufficient_R_CMM,
)
from services.mesh import mesh_random
from services.uniform import is_CMM_uniform

LAMBDAS = [0.1, 1.0, 10.0, 100.0]
I3, L3, L3_INV = special_kernels(3)
COLUMN_INCREASING = ArrayKernel.from_rows([[1.0], [2.0, 1.0]])


def fode(alpha=0.6, seed=42, N=20):
    return fode_kernel(FodeKernelSpec(alpha=alpha, mesh=mesh_random(0.1, N, seed)))


def test_column_monotone():
    assert is_column_monotone(L3).holds
    assert is_column_monotone(fode()).holds

    report = is_column_monotone(L3_INV)
    assert not report.holds
    assert report.witness.property == "A nonnegative"
    assert report.witness.indices == (2, 1)


def test_row_monotone():
    assert is_row_monotone(I3).holds
    report = is_row_monotone(COLUMN_INCREASING)
    assert not report.holds
    assert report.witness.indices == (2, 1)
    assert (report.witness.lhs, report.witness.rhs) == (1.0, 2.0)


def test_doubly_monotone():
    assert is_doubly_monotone(L3).holds
    assert is_doubly_monotone(I3).holds
    report = is_doubly_monotone(ArrayKernel.from_rows([[1.0], [2.0, 0.5]]))
    assert not report.holds
    assert report.witness.indices == (2, 1)
    assert report.witness.property == "A column monotone"


def test_inverse_sign_pattern():
    assert inverse_sign_pattern(I3).holds
    assert inverse_sign_pattern(L3).holds
    assert inverse_sign_pattern(fode()).holds

    report = inverse_sign_pattern(ArrayKernel.from_rows([[1.0], [3.0, 1.0]]))
    assert not report.holds
    assert report.witness.property == "A^-1 row sum nonnegative"
    assert report.witness.indices == (2, 0)


def test_singular_kernel_is_reported_not_raised():
    report = is_R_CMM(ArrayKernel.from_rows([[1.0], [0.5, 0.0]]))
    assert not report.holds
    assert report.witness.property == "A invertible"
    assert report.witness.indices == (2, 0)


def test_r_cmm_examples():
    assert is_R_CMM(L3).holds
    assert is_R_CMM(ArrayKernel.from_rows([[1.0], [0.0, 2.0]])).holds
    report = is_R_CMM(COLUMN_INCREASING)
    assert not report.holds
    assert report.witness.property == "A column monotone"
    assert not report.warnings


def test_r_cmm_on_harness_meshes(harness_meshes):
    for mesh in harness_meshes:
        A = fode_kernel(FodeKernelSpec(alpha=0.6, mesh=mesh))
        assert is_R_CMM(A).holds
        assert sufficient_R_CMM(A).holds


def test_l_cmm_and_cmm():
    assert is_L_CMM(L3).holds
    assert is_L_CMM(I3).holds
    assert not is_L_CMM(COLUMN_INCREASING).holds
    assert is_CMM(L3).holds
    assert not is_CMM(COLUMN_INCREASING).holds


def test_log_convexity():
    assert log_convexity_condition(L3).holds
    for seed in range(5):
        spec = FodeKernelSpec(alpha=0.4, mesh=mesh_random(0.1, 25, seed))
        assert log_convexity_condition(fode_kernel(spec)).holds
        assert log_convexity_condition(fode_beta_kernel(spec)).holds

    report = log_convexity_condition(ArrayKernel.from_rows([[1.0], [1.0, 1.0], [1.0, 5.0, 1.0]]))
    assert not report.holds
    assert report.witness.indices == (3, 1)
    assert report.witness.lhs == 1.0 and report.witness.rhs == 5.0


def test_log_convexity_needs_positive_entries():
    report = log_convexity_condition(I3)
    assert not report.holds
    assert report.witness.property == "A positive"


def test_sufficient_r_cmm():
    assert sufficient_R_CMM(fode()).holds
    assert sufficient_R_CMM(L3).holds
    assert not sufficient_R_CMM(COLUMN_INCREASING).holds


def test_necessary_rccmon():
    assert necessary_rccmon(L3).holds
    assert necessary_rccmon(I3).holds
    assert necessary_rccmon(fode()).holds
    report = necessary_rccmon(ArrayKernel.from_rows([[1.0], [0.0, 1.0], [0.0, 0.0, 0.1]]))
    assert not report.holds
    assert report.witness.indices == (3, 1)


def test_resolvent_rowsum_inequality():
    assert resolvent_rowsum_inequality(I3, 2.0).holds
    assert resolvent_rowsum_inequality(fode(), 1.0).holds
    assert resolvent_rowsum_inequality(fode(), 100.0).holds


def test_resolvent_nonneg():
    assert resolvent_nonneg(I3, 1.0).holds
    assert resolvent_nonneg(fode(), [0.5, 5.0, 50.0]).holds

    A = ArrayKernel.from_rows([[1.0], [1.0, 1.0], [0.0, 1.0, 1.0]])
    report = resolvent_nonneg(A, 10.0 ** np.arange(-2, 4))
    assert not report.holds
    assert report.witness.indices == (3, 2)


def test_completely_positive_matches_inverse_sign_pattern():
    kernels = [I3, L3, fode(), ArrayKernel.from_rows([[1.0], [3.0, 1.0]])]
    for A in kernels:
        assert is_completely_positive(A, LAMBDAS).holds == inverse_sign_pattern(A).holds


def test_column_monotone_via_cr_inverse(rng, random_kernel):
    for i in range(50):
        A = random_kernel(8)
        if i % 2:
            # h decreasing makes every column of h g^T nonincreasing
            h = np.sort(rng.uniform(0.1, 2.0, 8))[::-1]
            A = ArrayKernel(matrix=np.tril(np.outer(h, rng.uniform(0.1, 2.0, 8))))
        assert column_monotone_via_cr_inverse(A).holds == is_column_monotone(A).holds


def test_local_check_range():
    A = ArrayKernel.from_rows([[1.0], [0.5, 1.0], [2.0, 0.5, 1.0]])
    assert not is_column_monotone(A).holds
    report = is_column_monotone(A, range_n=2)
    assert report.holds
    assert report.range_n == 2


def test_run_check_dispatch():
    assert run_check("r-cmm", L3).holds
    assert run_check("resolvent-rowsum", L3).holds
    with pytest.raises(KeyError):
        run_check("sparkly", L3)


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9])
def test_fode_r_cmm_chain(alpha, fode_kernels_by_alpha):
    for A in fode_kernels_by_alpha[alpha]:
        for check in (is_R_CMM, sufficient_R_CMM, inverse_sign_pattern, necessary_rccmon):
            report = check(A, tol=1e-10)
            assert report.holds, report.summary()


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9])
def test_resolvent_corollaries_on_r_cmm_instances(alpha, fode_kernels_by_alpha):
    for A in fode_kernels_by_alpha[alpha]:
        assert is_R_CMM(A).holds
        report = resolvent_rowsum_inequality(A, LAMBDAS, tol=1e-10)
        assert report.holds, report.summary()
        assert resolvent_nonneg(A, LAMBDAS, tol=1e-10).holds


def test_shift_by_identity_stays_r_cmm():
    for A in fode_instances(0.5, count=10):
        for lam in (0.1, 1.0, 10.0):
            shifted = ArrayKernel(matrix=np.eye(A.N) + lam * A.matrix)
            assert is_R_CMM(shifted).holds


def test_scaling_preserves_r_cmm(rng):
    instances = fode_instances(0.7, count=50, N=20)
    for A in instances:
        assert is_R_CMM(A).holds
        d = np.sort(rng.uniform(0.5, 2.0, A.N))
        assert is_R_CMM(scale_right(A, DiagonalKernel(d=d))).holds


def test_m_pattern_inverse_is_nonnegative(rng):
    for _ in range(50):
        N = int(rng.integers(1, 10))
        B = np.tril(-rng.uniform(0.0, 2.0, size=(N, N)), -1) + np.diag(rng.uniform(0.1, 2.0, N))
        A = pinv(ArrayKernel(matrix=B)).matrix
        assert np.all(np.tril(A) >= 0.0)
        assert np.all(np.diag(A) > 0.0)


@pytest.mark.parametrize("sequence, expected", [
    ([1.0, 0.5, 0.25, 0.125], True),
    ([1.0, 0.2, 0.15], True),
    ([1.0, 0.5, 0.1], False),
])
def test_row_constant_r_cmm_matches_uniform_cmm(sequence, expected):
    assert is_R_CMM(ArrayKernel.row_constant(sequence)).holds is expected
    assert is_CMM_uniform(sequence).holds is expected
