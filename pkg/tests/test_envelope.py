import math

import numpy as np
import pytest

from qwline import (
    CoinParameter,
    EnvelopeField,
    flat_top_prediction,
    gaussian_envelope_analytic,
    propagate_envelope,
    sinc_spectrum_check,
    talbot_period,
    width_law,
)
from qwline.errors import BoundaryLeakError, DomainError
from qwline.initial import EnvelopeSpec, sample_envelope

COIN = CoinParameter(math.pi / 4)


def gaussian_field(sigma0=10.0, half=300, carrier=math.pi / 2, branch=1):
    x = np.arange(-half, half + 1, dtype=float)
    return EnvelopeField.from_samples(
        x, np.exp(-0.5 * (x / sigma0) ** 2), carrier=carrier, branch=branch
    )


# --- field container ---------------------------------------------------------

def test_field_normalization_and_spacing():
    f = gaussian_field()
    assert f.norm_squared() == pytest.approx(1.0, abs=1e-12)
    assert f.h == 1.0
    with pytest.raises(ValueError):
        EnvelopeField(
            grid=np.array([0.0, 2.0, 4.0]),
            values=np.ones(3, dtype=complex),
            carrier=0.0,
            branch=1,
        )  # spacing > 1
    with pytest.raises(ValueError):
        EnvelopeField(
            grid=np.array([0.0, 1.0, 3.0]),
            values=np.ones(3, dtype=complex),
            carrier=0.0,
            branch=1,
        )  # non-uniform


def test_half_spacing_grid_supported():
    x = np.arange(-200, 201) * 0.5
    f = EnvelopeField.from_samples(
        x, np.exp(-0.5 * (x / 10.0) ** 2), carrier=0.0, branch=1
    )
    assert f.norm_squared() == pytest.approx(1.0, abs=1e-12)
    out = propagate_envelope(f, COIN, 10.0, "exact")
    assert out.norm_squared() == pytest.approx(1.0, abs=1e-12)


# --- propagation -------------------------------------------------------------

def test_propagate_dt_zero_identity():
    f = gaussian_field()
    out = propagate_envelope(f, COIN, 0.0, 2)
    assert np.max(np.abs(out.values - f.values)) < 1e-14


@pytest.mark.parametrize("trunc", [1, 2, 3, "exact"])
def test_propagate_conserves_norm(trunc):
    f = gaussian_field()
    out = propagate_envelope(f, COIN, 123.0, trunc)
    assert abs(out.norm_squared() - 1.0) < 1e-12
    assert out.time == pytest.approx(123.0)


def test_propagate_validates_truncation():
    f = gaussian_field()
    with pytest.raises(ValueError):
        propagate_envelope(f, COIN, 1.0, 4)
    with pytest.raises(DomainError):
        propagate_envelope(f, CoinParameter(0.0), 1.0, 2)


def test_advection_shifts_without_distortion():
    # carrier k0 = 0, branch +: characteristics move at -cos(theta)
    x = np.arange(-301, 302, dtype=float)
    f = EnvelopeField.from_samples(
        x, np.exp(-0.5 * (x / 10.0) ** 2), carrier=0.0, branch=1
    )
    out = propagate_envelope(f, COIN, 100.0, 1)
    c = float(np.sum(x * out.density()) / np.sum(out.density()))
    assert c == pytest.approx(-100 * math.cos(math.pi / 4), abs=1e-9)
    shifted = np.exp(-0.5 * ((x + 100 * math.cos(math.pi / 4)) / 10.0) ** 2)
    shifted /= np.linalg.norm(shifted)
    assert np.max(np.abs(np.abs(out.values) - shifted)) < 1e-12


def test_paraxial_matches_analytic_gaussian():
    x = np.arange(-600, 601, dtype=float)
    f = EnvelopeField.from_samples(
        x, np.exp(-0.5 * (x / 10.0) ** 2), carrier=math.pi / 2, branch=1
    )
    out = propagate_envelope(f, COIN, 400.0, 2)
    ana = gaussian_envelope_analytic(10.0, 0.0, COIN, 1, 400.0, grid=x)
    assert np.max(np.abs(out.values - ana.values)) < 1e-6


def test_boundary_leak_detected():
    x = np.arange(-40, 41, dtype=float)
    f = EnvelopeField.from_samples(
        x, np.exp(-0.5 * (x / 10.0) ** 2), carrier=0.0, branch=1
    )
    with pytest.raises(BoundaryLeakError):
        propagate_envelope(f, COIN, 60.0, 1)  # packet reaches the edge


# --- analytic Gaussian law ---------------------------------------------------

def test_analytic_gaussian_t0():
    f = gaussian_envelope_analytic(10.0, 0.0, COIN, 1, 0.0)
    peak = np.argmax(np.abs(f.values))
    assert f.grid[peak] == 0.0
    std = math.sqrt(float(np.sum(f.grid**2 * f.density()) / np.sum(f.density())))
    assert std == pytest.approx(10.0 / math.sqrt(2), rel=1e-9)


@pytest.mark.parametrize("s", [1, -1])
def test_analytic_gaussian_width(s):
    sigma0, t = 10.0, 500.0
    f = gaussian_envelope_analytic(sigma0, 0.0, COIN, s, t)
    w = width_law(t, sigma0, COIN)
    assert w == pytest.approx(math.sqrt(26.0), rel=1e-12)
    std = math.sqrt(float(np.sum(f.grid**2 * f.density()) / np.sum(f.density())))
    assert std == pytest.approx(sigma0 * w / math.sqrt(2), rel=1e-6)


def test_width_law_values():
    assert width_law(0.0, 7.0, COIN) == 1.0
    sigma0 = 10.0
    tn = sigma0**2 * math.tan(COIN.theta)
    assert width_law(tn, sigma0, COIN) == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert width_law(5 * tn, sigma0, COIN) == pytest.approx(math.sqrt(26.0), rel=1e-14)
    # linear asymptote reached within a few percent past 5 sigma0^2 tan(theta)
    assert width_law(5 * tn, sigma0, COIN) == pytest.approx(5.0, rel=0.02)
    assert width_law(2000.0, 15.0, COIN) == pytest.approx(8.9449, rel=1e-4)
    slope = (width_law(1e7, sigma0, COIN) - width_law(1e7 - 1, sigma0, COIN))
    assert slope == pytest.approx(1.0 / tn, rel=1e-6)


# --- flat-top prediction -----------------------------------------------------

def test_flat_top_values():
    pred = flat_top_prediction(15.0, COIN, 20000.0)
    assert pred.w == pytest.approx(2 * math.pi * 20000 / 15, rel=1e-14)
    assert pred.w == pytest.approx(8377.58, abs=0.01)
    assert pred.level * pred.w == pytest.approx(1.0, rel=1e-14)
    assert pred.std == pytest.approx(pred.w / math.sqrt(12), rel=1e-14)
    assert pred.std == pytest.approx(2418.40, abs=0.01)
    assert not pred.transient


def test_flat_top_transient_flag():
    thresh = 2 * 15.0**2 * math.tan(COIN.theta)
    assert flat_top_prediction(15.0, COIN, thresh * 0.99).transient
    assert not flat_top_prediction(15.0, COIN, thresh * 1.01).transient


# --- sinc spectrum -----------------------------------------------------------

def test_sinc_spectrum_band_edges():
    rep = sinc_spectrum_check(15.0)
    assert rep.passband_edge == pytest.approx(math.pi / 15, rel=1e-15)
    assert rep.out_of_band_fraction < 1e-3
    assert rep.inband_ripple_rms < 0.05
    assert sinc_spectrum_check(2.0).passband_edge == pytest.approx(math.pi / 2)
    with pytest.raises(ValueError):
        sinc_spectrum_check(1.5)


# --- self-imaging ------------------------------------------------------------

def test_talbot_period_values():
    assert talbot_period(10.0, COIN) == pytest.approx(100 / (2 * math.pi), rel=1e-14)
    assert talbot_period(10.0, COIN) == pytest.approx(15.9155, abs=1e-4)
    coin_inv = CoinParameter(math.atan(2 * math.pi))
    assert talbot_period(1.0, coin_inv) == pytest.approx(1.0, rel=1e-12)


def periodic_field(lam=32, periods=8):
    n = periods * lam
    x = np.arange(n, dtype=float) - n // 2
    vals = sample_envelope(EnvelopeSpec(family="periodic", lambda_=lam), x)
    return x, EnvelopeField.from_samples(x, vals, carrier=math.pi / 2, branch=1)


@pytest.mark.parametrize("n_mult", [1, 2, 3])
def test_talbot_recurrence(n_mult):
    lam = 32
    T = talbot_period(lam, COIN)
    _, f0 = periodic_field(lam)
    ft = propagate_envelope(f0, COIN, n_mult * T, 2, periodic=True)
    assert np.max(np.abs(ft.density() - f0.density())) < 1e-6


def test_talbot_dynamics_nontrivial_between_revivals():
    lam = 32
    T = talbot_period(lam, COIN)
    _, f0 = periodic_field(lam)
    mid = propagate_envelope(f0, COIN, T / 16.0, 2, periodic=True)
    assert np.max(np.abs(mid.density() - f0.density())) > 1e-4


def test_talbot_generic_profile_half_period_shift():
    # even-harmonic content reproduces shifted by lam/2 at odd multiples of T
    lam = 32
    T = talbot_period(lam, COIN)
    n = 8 * lam
    x = np.arange(n, dtype=float) - n // 2
    g = (np.cos(2 * np.pi * x / lam)
         + 0.4 * np.cos(4 * np.pi * x / lam)
         + 0.2 * np.sin(6 * np.pi * x / lam))
    f0 = EnvelopeField.from_samples(x, g, carrier=math.pi / 2, branch=1)
    ft = propagate_envelope(f0, COIN, T, 2, periodic=True)
    assert np.max(np.abs(ft.density() - f0.density())) > 1e-3
    assert np.max(np.abs(ft.density() - np.roll(f0.density(), lam // 2))) < 1e-12
    f2t = propagate_envelope(f0, COIN, 2 * T, 2, periodic=True)
    assert np.max(np.abs(f2t.density() - f0.density())) < 1e-12
