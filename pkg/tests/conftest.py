import numpy as np
import pytest

from qtraj import qlinalg as ql


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def hs_dm():
    return ql.ket_to_dm(ql.hs_state())


@pytest.fixture(scope="session")
def ghz_dm():
    return ql.ket_to_dm(ql.ghz_state())


@pytest.fixture(scope="session")
def w_dm():
    return ql.ket_to_dm(ql.w_state())


@pytest.fixture
def bell_dm():
    psi = (ql.basis_state("00") + ql.basis_state("11")) / np.sqrt(2)
    return ql.ket_to_dm(psi)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in mod.RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
