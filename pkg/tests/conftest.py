"""Global fixtures."""

from pathlib import Path

from _pytest.fixtures import SubRequest
import numpy as np
import pytest
from scipy.stats import unitary_group

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> str:
    """Return the text of a file under tests/fixtures."""
    return (FIXTURES / name).read_text()


@pytest.fixture(name="fixture_path")
def fixture_path_fixture(request: SubRequest) -> Path:
    """Path of the fixture file named by the test parameter."""
    path = FIXTURES / request.param
    assert path.exists(), f"missing fixture {request.param}"
    return path


@pytest.fixture(name="rng")
def rng_fixture() -> np.random.Generator:
    """Seeded generator, fresh for every test."""
    return np.random.default_rng(20240601)


@pytest.fixture(name="haar_unitary")
def haar_unitary_fixture(request: SubRequest):
    """Haar-random unitary of the size given by the test parameter."""
    return unitary_group.rvs(request.param, random_state=7)


@pytest.fixture(name="fixture_text")
def fixture_text_fixture(request: SubRequest) -> str:
    """Text of the fixture file named by the test parameter."""
    return load_fixture(request.param)
