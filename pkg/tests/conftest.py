import numpy as np
import pytest

from splab.holomap import catalog, catalog_names

CATALOG = catalog_names()


def fd_jacobian(f, z, h=1e-6):
    """Central differences along real steps: the holomorphic partials."""
    z = np.asarray(z, dtype=complex)
    cols = []
    for j in range(f.n):
        e = np.zeros(f.n, dtype=complex)
        e[j] = h
        cols.append((f.values(z + e)[0] - f.values(z - e)[0]) / (2 * h))
    return np.array(cols).T


def uniform_points(n, count, rng, radius=0.95):
    r = radius * np.sqrt(rng.uniform(size=(count, n)))
    return r * np.exp(2j * np.pi * rng.uniform(size=(count, n)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=CATALOG)
def catalog_map(request):
    return catalog(request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()
