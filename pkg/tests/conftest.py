import numpy as np
import pytest

from scribseg.core import BinaryMask, ChannelStack, ScribbleSet


def random_stack(rng, height, width, channels, scale=1.0):
    data = scale * rng.normal(size=(height, width, channels))
    return ChannelStack(data.astype(np.float32))


def random_scribbles(rng, height, width, n_points):
    pts = set()
    while len(pts) < n_points:
        pts.add((int(rng.integers(0, width)), int(rng.integers(0, height)), 1))
    return ScribbleSet(points=tuple(sorted(pts)), height=height, width=width)


def random_mask(rng, height, width, density=0.5):
    return BinaryMask(rng.random((height, width)) < density)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
