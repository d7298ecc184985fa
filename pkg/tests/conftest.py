import numpy as np
import pytest

from gala import HEParams
from gala.backend import with_overrides

# (n_o, n_i) dot-product shapes exercised across the suite; cells whose n_i
# exceeds the slot count are run as column blocks.
MV_GRID = [(1, 2048), (2, 1024), (16, 128), (8, 256), (4, 16)]
MV_NS = (2048, 256)

# (u_w, u_h, c_i, k, c_o, n) convolution shapes with valid channel packing.
CONV_GRID = [
    (4, 4, c_i, k, c_o, 64)
    for c_i in (4, 8)
    for c_o in (4, 8)
    for k in (1, 3)
] + [(4, 4, 8, k, 8, 128) for k in (1, 3)]


@pytest.fixture(scope="session")
def params():
    return HEParams()


@pytest.fixture(scope="session")
def params64():
    return with_overrides(HEParams(), n=64)


@pytest.fixture(scope="session")
def params256():
    return with_overrides(HEParams(), n=256)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
