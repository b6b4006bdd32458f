import pytest

from rayclass import PrecisionContext


@pytest.fixture(scope="session")
def ctx256():
    return PrecisionContext(256, "1e-40")


@pytest.fixture(scope="session")
def ctx300():
    return PrecisionContext(300, "1e-40")


@pytest.fixture(scope="session")
def ctx512():
    return PrecisionContext(512, "1e-40")
