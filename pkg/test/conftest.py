import numpy as np
import pytest

from models.fode import FodeKernelSpec
from models.kernel import ArrayKernel
from schemas.experiment import DEFAULT_MESHES
from services.fode import fode_kernel
from services.mesh import mesh_alternating, mesh_random, parse_mesh_spec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_kernel(rng):
    """Factory for random lower triangular kernels with entries in [low, high]"""
    def make(N: int, low: float = 0.1, high: float = 2.0) -> ArrayKernel:
        return ArrayKernel(matrix=np.tril(rng.uniform(low, high, size=(N, N))))
    return make


@pytest.fixture(scope="session")
def harness_meshes():
    return [parse_mesh_spec(spec) for spec in DEFAULT_MESHES]


def fode_instances(alpha: float, count: int = 100, N: int = 30):
    """FODE kernels on seeded random meshes, every fifth one an alternating ratio-10 mesh"""
    rng = np.random.default_rng(int(alpha * 1000))
    kernels = []
    for i in range(count):
        if i % 5 == 4:
            tau1 = rng.uniform(0.005, 0.05)
            ratio = 10.0 if i % 10 == 4 else 0.1
            mesh = mesh_alternating(tau1, ratio, N)
        else:
            mesh = mesh_random(0.1, N, seed=int(rng.integers(0, 2**63)))
        kernels.append(fode_kernel(FodeKernelSpec(alpha=alpha, mesh=mesh)))
    return kernels


@pytest.fixture(scope="session")
def fode_kernels_by_alpha():
    return {alpha: fode_instances(alpha) for alpha in (0.3, 0.6, 0.9)}
