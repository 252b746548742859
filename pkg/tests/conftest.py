import pytest

from k3kit.catalog import load


@pytest.fixture(scope="session")
def catalog():
    return load()
