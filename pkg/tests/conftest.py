import pytest

from pvk.kernel import reset_kernel
from pvk.theory import load_stdlib


@pytest.fixture(autouse=True)
def fresh_kernel():
    reset_kernel()
    yield
    reset_kernel()


@pytest.fixture
def reg():
    return load_stdlib()
