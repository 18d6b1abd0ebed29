import numpy as np
import pytest

import vibroprint as vp
from vibroprint.units import mm_to_m


@pytest.fixture(scope="session")
def materials():
    return {m.name: m for m in vp.builtin_materials()}


@pytest.fixture()
def tpu_beam(materials):
    """The soft-material design point: square 2.6 mm, length 2.0 mm."""
    return vp.BeamSpec(materials["TPU"], vp.CrossSection.square(mm_to_m(2.6)), mm_to_m(2.0))


@pytest.fixture()
def st45b_beam(materials):
    """The rigid-material phalanx design point: square 1.0 mm, length 3.5 mm."""
    return vp.BeamSpec(materials["ST45B"], vp.CrossSection.square(mm_to_m(1.0)), mm_to_m(3.5))


def make_sine(freq_hz, amplitude=1.0, rate=500e3, n=5000):
    t = np.arange(n) / rate
    return vp.Recording(amplitude * np.sin(2.0 * np.pi * freq_hz * t), rate)


@pytest.fixture()
def make_sine_recording():
    return make_sine
