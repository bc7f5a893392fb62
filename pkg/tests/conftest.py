import time

import pytest

import ryddrive as rd


@pytest.fixture(scope="session")
def defects():
    return rd.rb85_defects()


@pytest.fixture(scope="session")
def reference_channels():
    return rd.reference_channels()


@pytest.fixture(scope="session")
def computed_channels_timed():
    """Channel constants from first principles, with the wall time they took."""
    t0 = time.perf_counter()
    chs = rd.compute_channels()
    return chs, time.perf_counter() - t0


@pytest.fixture(scope="session")
def computed_channels(computed_channels_timed):
    return computed_channels_timed[0]
