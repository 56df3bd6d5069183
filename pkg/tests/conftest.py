from pathlib import Path

import numpy as np
import pytest

import iota

DATA = Path(iota.__file__).parent / "data"

_acceptance: dict[int, tuple[str, list[bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = marker.args
    _acceptance.setdefault(number, (title, []))[1].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, results = _acceptance[number]
        status = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")


@pytest.fixture
def data_dir() -> Path:
    return DATA


def random_positive(rng: np.random.Generator, n: int, low: float = 0.01, high: float = 1.0) -> np.ndarray:
    """Strictly positive, hence irreducible, matrix."""
    return rng.uniform(low, high, size=(n, n))


def random_irreducible(rng: np.random.Generator, n: int) -> np.ndarray:
    """Sparse nonnegative matrix made irreducible by a full cycle through all indices."""
    M = rng.uniform(0, 1, size=(n, n)) * (rng.uniform(size=(n, n)) < 0.4)
    order = rng.permutation(n)
    for a, b in zip(order, np.roll(order, -1)):
        M[a, b] = max(M[a, b], rng.uniform(0.1, 1.0))
    return M


def spectral_radius(M: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(M))))
