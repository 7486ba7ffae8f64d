# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import ScalarField
from pyalfven.fields.grid import Grid


@pytest.fixture
def box() -> Grid:
    return Grid(d=2, L=4.0, N=32)


@pytest.fixture
def small_box() -> Grid:
    return Grid(d=2, L=1.0, N=8)


@pytest.fixture
def torus() -> Grid:
    return Grid(d=2, L=np.pi, N=32, geometry='periodic-torus')


@pytest.fixture
def strip() -> Grid:
    # Δ = 0.25, four cells across the strip.
    return Grid(d=2, L=4.0, N=32, geometry='strip')


@pytest.fixture
def wave(torus) -> ScalarField:
    return ScalarField.from_function(torus, lambda x, y: np.sin(x) * np.cos(2.0 * y))
