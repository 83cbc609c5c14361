import numpy as np
import pytest

from specangles import PortableRng, SymmetricMatrix, eigh


@pytest.fixture(scope="session", autouse=True)
def warm_eigh_kernel():
    # Compile the jitted Jacobi kernel once so timed tests measure math, not
    # compilation.
    eigh(SymmetricMatrix(np.array([[2.0, 1.0], [1.0, 3.0]])))


def random_symmetric(n: int, seed: int) -> SymmetricMatrix:
    g = PortableRng(seed).gaussians(n * n).reshape(n, n)
    return SymmetricMatrix(g + g.T)


def random_psd(n: int, seed: int) -> SymmetricMatrix:
    g = PortableRng(seed).gaussians(n * n).reshape(n, n)
    return SymmetricMatrix(g @ g.T)
