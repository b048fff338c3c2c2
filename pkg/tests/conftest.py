import json
import pathlib
import sys

import numpy as np
import pytest

HERE = pathlib.Path(__file__).parent
sys.path.insert(0, str(HERE))

from boundary_triples import models  # noqa: E402


@pytest.fixture(scope="session")
def frozen():
    return json.loads((HERE / "data" / "oracle_values.json").read_text())


@pytest.fixture(scope="session")
def interval():
    return models.make_interval_model()


@pytest.fixture(scope="session")
def interval_small():
    return models.IntervalModel(quad_size=128, degree=24)


@pytest.fixture(scope="session")
def disk4():
    return models.make_disk_model(modes=4)


@pytest.fixture(scope="session")
def disk8():
    return models.make_disk_model(modes=8)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
