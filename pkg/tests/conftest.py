import pytest

from torushodge.jordan_structure import jordan_decompose
from torushodge.manifolds import cyclic3_bundle, kt4_bundle


@pytest.fixture(scope="session")
def kt4_jordan():
    return jordan_decompose(kt4_bundle().A)


@pytest.fixture(scope="session")
def cyclic3_jordan():
    return jordan_decompose(cyclic3_bundle().A)
