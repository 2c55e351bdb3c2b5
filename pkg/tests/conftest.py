import pytest

from nstqft.hopf import small_qsl2, stabilization_params
from nstqft.rep import standard_modules
from nstqft.tangle import CouponRegistry


@pytest.fixture(scope="session")
def H3():
    return small_qsl2(3)


@pytest.fixture(scope="session")
def F3(H3):
    return H3.field


@pytest.fixture(scope="session")
def mods(H3):
    return standard_modules(H3)


@pytest.fixture(scope="session")
def reg(H3):
    return CouponRegistry(H3)


@pytest.fixture(scope="session")
def params(H3):
    return stabilization_params(H3)


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(LINES):
            terminalreporter.write_line(LINES[k])
