import numpy as np
import pytest

from arcszego.geometry import ArcGeometry


def chebyshev_samples(fn, n=256):
    """Rows (t, re, im) of fn at n+1 Chebyshev-spaced parameters."""
    t = (1.0 - np.cos(np.pi * np.arange(n + 1) / n)) / 2.0
    z = fn(t)
    return np.column_stack([t, z.real, z.imag])


@pytest.fixture(scope="session")
def unit_segment():
    return ArcGeometry.segment(-1.0, 1.0)


@pytest.fixture(scope="session")
def tilted_segment():
    return ArcGeometry.segment(0.0, 2.0j)


@pytest.fixture(scope="session")
def parabola_arc():
    # mildly curved arc over [-1, 1]; opens to a near-circular curve
    def fn(t):
        x = 2.0 * t - 1.0
        return x + 0.15j * (1.0 - x * x)
    return ArcGeometry.from_samples(chebyshev_samples(fn))
