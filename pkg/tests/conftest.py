import numpy as np
import pytest

from toposources.embedding import PointCloud

_CRITERIA: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    _CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def noisy_circle():
    gen = np.random.default_rng(7)
    theta = gen.uniform(0, 2 * np.pi, 2000)
    pts = np.column_stack([np.cos(theta), np.sin(theta)]) + gen.normal(0, 0.02, (2000, 2))
    return PointCloud(pts)
