import numpy as np
import pytest

from sisogrand.codes import get_code


@pytest.fixture(scope="session")
def ofec():
    return get_code("ofec_bch_256_239")


@pytest.fixture(scope="session")
def hamming15():
    return get_code("hamming_15_11")


@pytest.fixture(scope="session")
def ext_hamming():
    return get_code("ext_hamming_32_26")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
