import pytest

from topology.chains import alexander_chain
from topology.realize import surface_model
from topology.surface import exhaustion_for


@pytest.fixture(scope="session")
def ray():
    return exhaustion_for("ray", 3)


@pytest.fixture(scope="session")
def binary():
    return exhaustion_for("binary", 3)


@pytest.fixture(scope="session")
def two_rays():
    return exhaustion_for("2-rays", 3)


@pytest.fixture(scope="session")
def ray_model(ray):
    return surface_model(ray)


@pytest.fixture(scope="session")
def binary_model(binary):
    return surface_model(binary)


@pytest.fixture(scope="session")
def ray_chain(ray):
    return alexander_chain(ray)


@pytest.fixture(params=["ray", "binary", "2-rays"])
def family(request):
    return request.param
