import numpy as np
import pytest

from zapsim import gaussian_pulse, make_grid, normalize, to_spectrum

DEFAULT_N = 2**19
DEFAULT_DT = 10e-15
PULSE_FWHM = 100e-15


@pytest.fixture(scope="session")
def default_grid():
    return make_grid(DEFAULT_N, DEFAULT_DT)


@pytest.fixture(scope="session")
def mid_grid():
    return make_grid(2**18, DEFAULT_DT)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(2**12, DEFAULT_DT)


@pytest.fixture(scope="session")
def default_pulse(default_grid):
    return gaussian_pulse(default_grid, PULSE_FWHM)


@pytest.fixture(scope="session")
def default_mode(default_pulse):
    return normalize(default_pulse)


@pytest.fixture(scope="session")
def default_mode_spec(default_mode):
    return to_spectrum(default_mode)


@pytest.fixture(scope="session")
def mid_pulse(mid_grid):
    return gaussian_pulse(mid_grid, PULSE_FWHM)


@pytest.fixture(scope="session")
def mid_mode(mid_pulse):
    return normalize(mid_pulse)


def random_field(grid, seed, offset=0.0):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n) + offset
    from zapsim import TemporalField

    return TemporalField(grid, amp)
