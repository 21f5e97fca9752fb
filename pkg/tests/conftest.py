from pathlib import Path

import pytest

from dapn import netgen, tm

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def polyupn():
    return netgen.build_polyupn()


@pytest.fixture(scope="session")
def wutm():
    return tm.wutm24()


@pytest.fixture
def data_dir() -> Path:
    return DATA
