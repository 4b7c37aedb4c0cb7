from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from secondorder.sysmodel import Kind, SecondOrderSystem

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "systems"


def cofactor_det(m):
    """Exact determinant by Laplace expansion along the first row."""
    m = [[Fraction(v) for v in row] for row in m]
    if len(m) == 1:
        return m[0][0]
    total = Fraction(0)
    for j, pivot in enumerate(m[0]):
        if pivot:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * pivot * cofactor_det(minor)
    return total


def companion_power(a_tilde, k):
    """a_tilde**k by repeated multiplication (no matrix_power)."""
    out = np.eye(a_tilde.shape[0])
    for _ in range(k):
        out = out @ a_tilde
    return out


def random_system(rng, n=None, r=None, p=None, kind=Kind.DISCRETE, a1_zero=False, low=-2.0, high=2.0):
    n = n or int(rng.integers(1, 5))
    r = r if r is not None else int(rng.integers(1, 4))
    p = p or int(rng.integers(1, 4))
    a0 = rng.uniform(low, high, (n, n))
    a1 = np.zeros((n, n)) if a1_zero else rng.uniform(low, high, (n, n))
    b = rng.uniform(low, high, (n, r))
    c = rng.uniform(low, high, (p, n))
    return SecondOrderSystem(kind, n, r, p, a0, a1, b, c)


def well_conditioned(rng, n, max_cond=100.0):
    while True:
        t = rng.uniform(-2, 2, (n, n)) + 3 * np.eye(n)
        if np.linalg.cond(t) < max_cond:
            return t


def load_example(name):
    from secondorder.sysmodel import load_system

    return load_system((SYSTEMS_DIR / name).read_text(encoding="utf-8"))


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def damped2_discrete():
    return SecondOrderSystem.from_matrices(
        [[1, 0], [1, -1]], [[0, 1], [1, 2]], np.zeros((2, 1)), [[2, 1]], kind=Kind.DISCRETE
    )


@pytest.fixture
def undamped2_discrete():
    return SecondOrderSystem.from_matrices(
        [[3, 2], [-2, -1]], np.zeros((2, 2)), np.zeros((2, 0)), [[3, 1]], kind=Kind.DISCRETE
    )


@pytest.fixture
def damped3_continuous():
    return SecondOrderSystem.from_matrices(
        [[1, 0, 2], [2, 1, -1], [3, 0, -2]],
        [[0, 3, 1], [4, 2, 1], [1, -2, 0]],
        [1, 0, 2],
        np.eye(3),
    )


@pytest.fixture
def undamped2_continuous():
    return SecondOrderSystem.from_matrices([[2, 1], [3, 4]], np.zeros((2, 2)), [1, 2], [[1, 3]])


@pytest.fixture
def cancelling_system():
    # H(s) = (s^2 - 4) / ((s^2 - 1)(s^2 - 4))
    return SecondOrderSystem.from_matrices(np.diag([1.0, 4.0]), np.zeros((2, 2)), [1, 0], [[1, 0]])


_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = mark.args
        _CRITERIA.append((number, title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_CRITERIA):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {number}: {title}")
