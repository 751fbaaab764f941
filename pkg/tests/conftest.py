import pytest

from crkit import corpus


@pytest.fixture(scope="session")
def sphere():
    return corpus.sphere()


@pytest.fixture(scope="session")
def levi_flat():
    return corpus.levi_flat()


@pytest.fixture(scope="session")
def quadric():
    return corpus.degenerate_quadric()


@pytest.fixture(scope="session")
def perturbed_sphere():
    return corpus.perturbed_sphere()


@pytest.fixture(scope="session")
def dilation():
    return corpus.sphere_dilation()


@pytest.fixture(scope="session")
def rotation():
    return corpus.sphere_rotation()


@pytest.fixture(scope="session")
def corrupted():
    return corpus.sphere_corrupted()


@pytest.fixture(scope="session")
def shear():
    return corpus.exp_shear()


@pytest.fixture(scope="session")
def shear_double():
    return corpus.exp_shear(scale=2)
