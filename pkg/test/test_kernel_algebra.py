import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from core.exceptions import ShapeError, SingularKernel
from models.fode import FodeKernelSpec
from models.kernel import ArrayKernel, DiagonalKernel
from services.fode import fode_kernel
from services.kernel_algebra import (
    conjugate_by_L,
    identity_residual,
    left_complementary,
    pconv,
    pconv_vec,
    pinv,
    resolvent,
    resolvent_residual,
    right_complementary,
    scale_right,
    special_kernels,
    verify_inverse,
    verify_resolvent,
)
from services.mesh import mesh_random, mesh_uniform
from services.uniform import conv

A2 = ArrayKernel.from_rows([[2.0], [1.0, 4.0]])


def fode(alpha, mesh):
    return fode_kernel(FodeKernelSpec(alpha=alpha, mesh=mesh))


def test_pconv_identity():
    I, L, L_inv = special_kernels(3)
    A = ArrayKernel.from_rows([[1.0], [2.0, 3.0], [4.0, 5.0, 6.0]])
    assert_array_equal(pconv(A, I).matrix, A.matrix)
    assert_array_equal(pconv(I, A).matrix, A.matrix)
    assert_array_equal(pconv(L_inv, L).matrix, I.matrix)
    assert_array_equal(pconv(L, L_inv).matrix, I.matrix)


def test_pconv_hand_example():
    A = ArrayKernel.from_rows([[2.0], [1.0, 3.0]])
    B = ArrayKernel.from_rows([[1.0], [4.0, 5.0]])
    assert pconv(A, B).rows() == [[2.0], [13.0, 15.0]]


def test_pconv_shape_mismatch():
    with pytest.raises(ShapeError):
        pconv(special_kernels(2)[0], special_kernels(3)[0])
    with pytest.raises(ShapeError):
        pconv_vec(special_kernels(2)[0], [1.0, 2.0, 3.0])


def test_pconv_vec():
    I, L, _ = special_kernels(4)
    x = np.array([1.0, 2.0, 3.0, 4.0])
    assert_array_equal(pconv_vec(I, x), x)
    assert_array_equal(pconv_vec(L, x), np.cumsum(x))
    assert_array_equal(pconv_vec(ArrayKernel.from_rows([[2.0], [1.0, 3.0]]), [1.0, 1.0]), [2.0, 4.0])


def test_special_kernels():
    I, L, L_inv = special_kernels(3)
    assert L.rows()[2] == [1.0, 1.0, 1.0]
    assert L_inv.rows()[2] == [0.0, -1.0, 1.0]
    with pytest.raises(ShapeError):
        special_kernels(0)


def test_pinv_examples():
    I, L, L_inv = special_kernels(4)
    assert_array_equal(pinv(I).matrix, I.matrix)
    assert_allclose(pinv(L).matrix, L_inv.matrix, atol=1e-15)
    assert_allclose(pinv(A2).rows()[1], [-0.125, 0.25], rtol=1e-15)
    assert verify_inverse(A2, pinv(A2))


def test_pinv_singular():
    with pytest.raises(SingularKernel) as excinfo:
        pinv(ArrayKernel.from_rows([[1.0], [2.0, 0.0]]))
    assert excinfo.value.row == 2


def test_complementary_kernels():
    I, L, _ = special_kernels(3)
    assert_allclose(right_complementary(I).matrix, L.matrix)
    assert_allclose(right_complementary(L).matrix, I.matrix, atol=1e-15)
    assert_allclose(left_complementary(I).matrix, L.matrix)
    assert_allclose(left_complementary(L).matrix, I.matrix, atol=1e-15)
    assert_allclose(right_complementary(A2).rows()[1], [0.125, 0.25], rtol=1e-15)
    assert_allclose(left_complementary(A2).rows()[1], [0.375, 0.25], rtol=1e-15)
    assert_allclose(pconv(A2, right_complementary(A2)).matrix, np.tril(np.ones((2, 2))), atol=1e-15)


def test_conjugate_by_L():
    I, L, _ = special_kernels(4)
    assert_array_equal(conjugate_by_L(I).matrix, I.matrix)
    assert_array_equal(conjugate_by_L(L).matrix, L.matrix)


def test_cr_inverse_is_l_inverse_times_a(random_kernel):
    _, _, L_inv = special_kernels(8)
    A = random_kernel(8)
    assert_allclose(pinv(right_complementary(A)).matrix, pconv(L_inv, A).matrix, atol=1e-12)


def test_associativity(random_kernel):
    for N in (1, 5, 20):
        A, B, C = random_kernel(N), random_kernel(N), random_kernel(N)
        left = pconv(pconv(A, B), C).matrix
        right = pconv(A, pconv(B, C)).matrix
        assert_allclose(left, right, rtol=1e-12)
        x = np.linspace(-1.0, 1.0, N)
        assert_allclose(pconv_vec(pconv(A, B), x), pconv_vec(A, pconv_vec(B, x)), rtol=1e-12, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(1, 10), elements=st.floats(-2.0, 2.0)),
       arrays(np.float64, 10, elements=st.floats(-2.0, 2.0)))
def test_row_constant_pconv_is_convolution(a, b):
    b = b[: a.size]
    lifted = pconv(ArrayKernel.row_constant(a), ArrayKernel.row_constant(b))
    expected = ArrayKernel.row_constant(conv(a, b))
    assert_allclose(lifted.matrix, expected.matrix, atol=1e-12)


def test_left_inverse_is_right_inverse(random_kernel):
    for _ in range(20):
        # diagonally dominant, so both residuals sit at roundoff level
        A = ArrayKernel(matrix=random_kernel(12, 0.1, 1.0).matrix + 12.0 * np.eye(12))
        B = pinv(A)
        assert identity_residual(A, B) < 1e-12
        assert identity_residual(B, A) < 1e-12


def brute_force_inverse(A: np.ndarray) -> np.ndarray:
    """Solve B (*) A = I as one dense system in the N(N+1)/2 unknowns b[n, j], j <= n"""
    N = A.shape[0]
    unknowns = [(n, j) for n in range(N) for j in range(n + 1)]
    index = {key: i for i, key in enumerate(unknowns)}
    system = np.zeros((len(unknowns), len(unknowns)))
    rhs = np.zeros(len(unknowns))
    for row, (n, k) in enumerate(unknowns):
        for j in range(k, n + 1):
            system[row, index[(n, j)]] = A[j, k]
        rhs[row] = 1.0 if n == k else 0.0
    solution = np.linalg.solve(system, rhs)
    B = np.zeros_like(A)
    for (n, j), i in index.items():
        B[n, j] = solution[i]
    return B


def test_pinv_matches_brute_force_solve(rng, random_kernel):
    for _ in range(200):
        A = random_kernel(int(rng.integers(1, 7)))
        B = pinv(A).matrix
        expected = brute_force_inverse(A.matrix)
        assert_allclose(B, expected, rtol=1e-10, atol=1e-10 * max(1.0, np.max(np.abs(expected))))


def test_resolvent_of_identity():
    I = special_kernels(3)[0]
    for lam in (0.5, 2.0):
        assert_allclose(resolvent(I, lam).matrix, lam / (1 + lam) * np.eye(3), rtol=1e-15)


def test_resolvent_rejects_bad_input():
    with pytest.raises(ValueError):
        resolvent(special_kernels(2)[0], 0.0)
    with pytest.raises(SingularKernel):
        resolvent(ArrayKernel.from_rows([[0.0]]), 1.0)


@pytest.mark.parametrize("lam", [0.1, 1.0, 10.0, 100.0])
def test_resolvent_identities(lam):
    A = fode(0.6, mesh_random(0.1, 30, seed=42))
    R = resolvent(A, lam)
    assert resolvent_residual(A, R, lam) <= 1e-10
    assert verify_resolvent(A, R, lam)
    commutator = pconv(R, A).matrix - pconv(A, R).matrix
    assert np.max(np.abs(commutator)) <= 1e-12


def test_resolvent_asymptotics():
    A = fode(0.6, mesh_uniform(30, 1.0))
    A_inv = pinv(A).matrix

    def distance(lam):
        return np.max(np.abs(lam * (np.eye(A.N) - resolvent(A, lam).matrix) - A_inv))

    ratio = distance(1e3) / distance(1e4)
    assert 5.0 <= ratio <= 20.0


def test_scale_right():
    I, L, _ = special_kernels(3)
    d = DiagonalKernel(d=[1.0, 2.0, 3.0])
    assert_array_equal(scale_right(I, d).matrix, np.diag([1.0, 2.0, 3.0]))
    assert scale_right(L, d).rows()[2] == [1.0, 2.0, 3.0]
    assert_array_equal(scale_right(A2, DiagonalKernel(d=[1.0, 1.0])).matrix, A2.matrix)
    with pytest.raises(ShapeError):
        scale_right(L, DiagonalKernel(d=[1.0, 2.0]))
