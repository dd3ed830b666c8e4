import numpy as np
import pytest

from edotsp.instance import Instance, unit_graph
from edotsp.tour import Tour

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_tour(inst, rng) -> Tour:
    return Tour.from_perm(rng.permutation(inst.n), inst)


def random_euclidean(n, rng, name="rand") -> Instance:
    pts = rng.uniform(0, 100, size=(n, 2))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    return Instance(name, np.floor(d + 0.5) + np.where(np.eye(n, dtype=bool), 0, 1), "euclidean-2d", pts)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def g10():
    return unit_graph(10)
