import numpy as np
import pytest

from admux import SystemConfig, build_panel, separation_matrix


@pytest.fixture
def panel2():
    return build_panel(2, k_on=0.1, k_off_base=10.0, gamma=5.0, v=3.0)


@pytest.fixture
def sep2(panel2):
    return separation_matrix(panel2)


@pytest.fixture
def default_system():
    return SystemConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20231018)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LOG

    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
