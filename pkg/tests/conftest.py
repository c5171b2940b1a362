import numpy as np
import pytest

from epspline import ExpSpace, build_basis, collocation_matrix, factorize


@pytest.fixture(scope="session")
def space2():
    return ExpSpace(2.0)


@pytest.fixture(scope="session")
def basis8(space2):
    return build_basis(np.linspace(-1.0, 1.0, 8), space2)


@pytest.fixture(scope="session")
def colloc8(basis8):
    return collocation_matrix(basis8)


@pytest.fixture(scope="session")
def lu8(colloc8):
    return factorize(colloc8)


@pytest.fixture(scope="session")
def grid400():
    return np.linspace(-1.0, 1.0, 400)
