import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from pydantic import ValidationError
from scipy.integrate import quad

from models.fode import FodeKernelSpec
from services.fode import fode_beta_kernel, fode_kernel, gamma_fn, step_size_bound
from services.kernel_algebra import conjugate_by_L
from services.mesh import mesh_alternating, mesh_from_steps, mesh_random, mesh_uniform


def spec(alpha, mesh):
    return FodeKernelSpec(alpha=alpha, mesh=mesh)


@pytest.mark.parametrize("x, expected", [
    (1.0, 1.0),
    (0.5, math.sqrt(math.pi)),
    (1.5, math.sqrt(math.pi) / 2.0),
    (5.0, 24.0),
])
def test_gamma_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, float("inf"), float("nan")])
def test_gamma_rejects_outside_domain(x):
    with pytest.raises(ValueError):
        gamma_fn(x)


def test_alpha_one_kernel_is_exactly_the_steps():
    mesh = mesh_from_steps([0.1, 0.2, 0.3])
    tau = mesh.tau
    A = fode_kernel(spec(1.0, mesh))
    assert_array_equal(A.matrix, np.tril(np.ones((3, 3))) * tau[np.newaxis, :])
    B = fode_beta_kernel(spec(1.0, mesh))
    assert_array_equal(B.matrix, np.tril(np.ones((3, 3))) * tau[:, np.newaxis])


def test_half_order_kernel_on_unit_steps():
    A = fode_kernel(spec(0.5, mesh_uniform(2, 2.0)))
    g = gamma_fn(1.5)
    assert A.entry(1, 0) == pytest.approx(1.0 / g, rel=1e-14)
    assert A.entry(2, 0) == pytest.approx(1.0 / g, rel=1e-14)
    assert A.entry(2, 1) == pytest.approx((math.sqrt(2.0) - 1.0) / g, rel=1e-14)


def test_half_order_beta_kernel_on_unit_steps():
    B = fode_beta_kernel(spec(0.5, mesh_uniform(2, 2.0)))
    assert B.entry(1, 0) == pytest.approx(1.0)
    assert B.entry(2, 0) == pytest.approx(1.0)
    assert B.entry(2, 1) == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-14)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8, 1.0])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_beta_kernel_is_scaled_conjugate(alpha, seed):
    s = spec(alpha, mesh_random(0.1, 25, seed))
    expected = gamma_fn(alpha + 1.0) * conjugate_by_L(fode_kernel(s)).matrix
    assert_allclose(fode_beta_kernel(s).matrix, expected, atol=1e-11)


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9])
def test_row_sums_integrate_the_unit_function(alpha):
    for mesh in (mesh_random(0.1, 40, 5), mesh_alternating(0.01, 10.0, 40)):
        A = fode_kernel(spec(alpha, mesh))
        expected = mesh.t[1:] ** alpha / gamma_fn(alpha + 1.0)
        assert_allclose(A.matrix.sum(axis=1), expected, rtol=1e-12)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_kernel_matches_quadrature(alpha):
    mesh = mesh_random(0.1, 8, 11)
    t = mesh.t
    A = fode_kernel(spec(alpha, mesh))
    g = gamma_fn(alpha)
    for n in range(1, mesh.N + 1):
        for j in range(1, n + 1):
            if j == n:
                # (t_n - s)^(alpha - 1) is singular at the right end
                value, _ = quad(lambda s: 1.0, t[j - 1], t[j], weight="alg",
                                wvar=(0.0, alpha - 1.0), epsabs=0.0, epsrel=1e-12)
            else:
                value, _ = quad(lambda s: (t[n] - s) ** (alpha - 1.0), t[j - 1], t[j],
                                epsabs=0.0, epsrel=1e-12)
            assert A.entry(n, n - j) == pytest.approx(value / g, rel=1e-9)


def test_kernel_is_lower_triangular_and_positive():
    A = fode_kernel(spec(0.4, mesh_random(0.1, 20, 3)))
    assert np.all(np.triu(A.matrix, 1) == 0.0)
    assert np.all(A.matrix[np.tril_indices(A.N)] > 0.0)


def test_step_size_bound():
    sup, ok = step_size_bound(spec(1.0, mesh_uniform(10, 1.0)), 5.0)
    assert sup == pytest.approx(0.1)
    assert ok
    assert not step_size_bound(spec(1.0, mesh_uniform(10, 1.0)), 10.0)[1]

    sup, ok = step_size_bound(spec(0.5, mesh_from_steps([0.25, 0.05])), 1.0)
    assert sup == pytest.approx(0.5 / gamma_fn(1.5))
    assert ok
    # the bound equals the largest diagonal entry
    A = fode_kernel(spec(0.5, mesh_from_steps([0.25, 0.05])))
    assert sup == pytest.approx(float(np.max(A.diagonal)), rel=1e-14)

    assert step_size_bound(spec(0.5, mesh_uniform(4, 1.0)), 0.0) == (pytest.approx(0.5 / gamma_fn(1.5)), True)
    with pytest.raises(ValueError):
        step_size_bound(spec(0.5, mesh_uniform(4, 1.0)), -1.0)


@pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
def test_spec_rejects_alpha_outside_unit_interval(alpha):
    with pytest.raises(ValidationError):
        FodeKernelSpec(alpha=alpha, mesh=mesh_uniform(4, 1.0))


def test_spec_is_frozen():
    s = spec(0.5, mesh_uniform(4, 1.0))
    with pytest.raises(ValidationError):
        s.alpha = 0.7
