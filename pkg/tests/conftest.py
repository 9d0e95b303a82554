import numpy as np
import pytest

from jacobiflow.connection import ChristoffelMap, ManifoldModel
from jacobiflow.zoo import euclidean, half_plane, sphere, torsion_demo


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture(scope="session")
def flat2():
    return euclidean(2)


@pytest.fixture(scope="session")
def sphere1():
    return sphere(1.0)


@pytest.fixture(scope="session")
def hplane():
    return half_plane()


@pytest.fixture(scope="session")
def tdemo():
    return torsion_demo(0.5)


@pytest.fixture(scope="session")
def zoo(flat2, sphere1, hplane, tdemo):
    return [flat2, sphere1, hplane, tdemo]


@pytest.fixture(scope="session")
def line_model():
    """m = 1 with Gamma_y(v, xi) = y v xi."""
    return ManifoldModel(
        dim=1,
        domain=lambda x: True,
        christoffel=ChristoffelMap(lambda y, v, xi: [y[0] * v[0] * xi[0]], name="yvxi"),
        name="line",
        sample=lambda rng: rng.uniform(-1, 1, 1),
    )


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
