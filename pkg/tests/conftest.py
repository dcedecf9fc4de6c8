import numpy as np
import pytest

from vlamap import Domain, build_grid


@pytest.fixture
def landau_domain():
    return Domain(Lx=4.0 * np.pi, Lv=4.0 * np.pi, v_star=3.8 * np.pi)


@pytest.fixture
def two_stream_domain():
    return Domain(Lx=2.0 * np.pi / 0.2, Lv=5.0 * np.pi, v_star=4.75 * np.pi)


@pytest.fixture
def small_grid(landau_domain):
    return build_grid(landau_domain, 32, 32)
