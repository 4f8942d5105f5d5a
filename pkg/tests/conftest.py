"""Shared reference fixtures: the standard pass-band and UWB evaluation setups."""

import pytest

import greenlink as gl

PASSBAND_LINK = dict(
    distance_m=10.0,
    path_loss_exponent=3.5,
    gain_margin=1e4,      # 40 dB
    reference_gain=1e3,   # 30 dB
    noise_psd=1e-18,      # -180 dB re 1 W/Hz
)


@pytest.fixture
def link10():
    return gl.LinkBudget(**PASSBAND_LINK)


@pytest.fixture
def rayleigh():
    return gl.FadingModel.rayleigh()


@pytest.fixture
def passband_profile():
    return gl.CircuitProfile.passband()


@pytest.fixture
def uwb_profile():
    return gl.CircuitProfile.uwb()


def make_passband_cfg(scheme, m, target=1e-3):
    transient = 5e-6 if scheme in (gl.SchemeId.NC_MFSK, gl.SchemeId.COHERENT_MFSK) else 20e-6
    return gl.SchemeConfig(scheme, m, 8192, 62500.0, 1.4, transient, target)


def make_uwb_cfg(scheme, m, target=1e-3):
    return gl.SchemeConfig(scheme, m, 20000, 5e8, 0.1, 2e-9, target)
