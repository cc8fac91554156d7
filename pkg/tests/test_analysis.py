import math

import numpy as np
import pytest

from qwline import (
    CoinChoice,
    CoinParameter,
    EnvelopeSpec,
    FlatTopPrediction,
    InitialConditionSpec,
    build,
    distance,
    evolve,
    exact_evolve,
    flatness,
    moments,
    parity_zeros,
    probability,
    track_packets,
    width_law,
)
from qwline.errors import PacketSeparationError, TransientError
from qwline.walk import ProbabilityDistribution

COIN = CoinParameter(math.pi / 4)


def rect_distribution(w=1001, level=None, x0=0, pad=100):
    # zero-padded so the profile's fall-off lies inside the window
    level = 1.0 / w if level is None else level
    P = np.zeros(w + 2 * pad)
    P[pad : pad + w] = level
    return ProbabilityDistribution(t=0, x_min=x0 - w // 2 - pad, P=P)


def rect_prediction(w, t=10000.0, sigma0=15.0):
    return FlatTopPrediction(
        sigma0=sigma0, theta=COIN.theta, t=t, w=float(w), level=1.0 / w,
        std=w / math.sqrt(12), transient=False,
    )


# --- moments ------------------------------------------------------------------

def test_moments_two_point():
    d = ProbabilityDistribution(t=0, x_min=-1, P=np.array([0.5, 0.0, 0.5]))
    m = moments(d)
    assert m.mean == 0.0 and m.std == pytest.approx(1.0, abs=1e-14)
    assert m.total == pytest.approx(1.0, abs=1e-15)


def test_moments_rect_std():
    w = 1001
    m = moments(rect_distribution(w))
    exact_discrete = math.sqrt((w**2 - 1) / 12.0)
    assert m.std == pytest.approx(exact_discrete, rel=1e-12)
    assert m.std == pytest.approx(w / math.sqrt(12), rel=1e-5)


def test_moments_translation_covariant():
    rng = np.random.default_rng(4)
    P = rng.random(31)
    a = ProbabilityDistribution(t=0, x_min=-15, P=P)
    b = ProbabilityDistribution(t=0, x_min=85, P=P)  # shifted by 100
    ma, mb = moments(a), moments(b)
    assert mb.mean - ma.mean == pytest.approx(100.0, abs=1e-10)
    assert mb.std == pytest.approx(ma.std, abs=1e-10)


def test_moments_empty_error():
    d = ProbabilityDistribution(t=0, x_min=0, P=np.zeros(3))
    with pytest.raises(ValueError):
        moments(d)


def test_ballistic_coefficient_drifting_start():
    # localized start on a single coin component spreads with std/t ~ 0.4544
    spec = InitialConditionSpec(
        envelope=EnvelopeSpec(family="delta"), carrier_k0=0.0,
        coin=CoinChoice(spinor=(1, 0)),
    )
    st = exact_evolve(build(spec, COIN), COIN, 6000)
    m = moments(probability(st))
    assert m.std / 6000 == pytest.approx(0.4544, abs=0.01)


# --- parity -------------------------------------------------------------------

def test_parity_zeros_delta():
    spec = InitialConditionSpec(
        envelope=EnvelopeSpec(family="delta"), carrier_k0=math.pi / 2,
        coin=CoinChoice(k0=math.pi / 2, s=1),
    )
    st0 = build(spec, COIN)
    d1 = probability(evolve(st0, COIN, 1))
    assert parity_zeros(d1, 1)
    d = probability(exact_evolve(st0, COIN, 6000))
    assert parity_zeros(d, 6000)


def test_parity_zeros_false_for_extended():
    spec = InitialConditionSpec(
        envelope=EnvelopeSpec(family="sinc", sigma0=15), carrier_k0=math.pi / 2,
        coin=CoinChoice(k0=math.pi / 2, s=1),
    )
    d = probability(exact_evolve(build(spec, COIN), COIN, 301))
    assert not parity_zeros(d, 301)


# --- flatness ------------------------------------------------------------------

def test_flatness_ideal_rect_exact():
    # dyadic level: every partial sum is exact, so zero means exactly zero
    w, level = 1024, 2.0**-10
    rep = flatness(rect_distribution(w, level=level), rect_prediction(w), rho=0.8)
    assert rep.ripple_rms == 0.0
    assert rep.level_error == pytest.approx(0.0, abs=1e-12)
    assert rep.plateau_mean == level
    assert rep.edge_sharpness < 5.0


def test_flatness_generic_rect_noise_floor():
    w = 1001
    rep = flatness(rect_distribution(w), rect_prediction(w), rho=0.8)
    assert rep.ripple_rms < 1e-14
    assert rep.level_error < 1e-14


def test_flatness_rho_validation_and_window_error():
    w = 101
    with pytest.raises(ValueError):
        flatness(rect_distribution(w), rect_prediction(w), rho=0.0)
    with pytest.raises(ValueError):
        flatness(rect_distribution(w), rect_prediction(10 * w), rho=1.0)


def test_flatness_transient_rejected():
    pred = FlatTopPrediction(
        sigma0=15.0, theta=COIN.theta, t=10.0, w=100.0, level=0.01,
        std=100 / math.sqrt(12), transient=True,
    )
    with pytest.raises(TransientError):
        flatness(rect_distribution(101), pred)


def test_flatness_detects_ripple_level():
    w = 1001
    d = rect_distribution(w)
    x = d.positions
    ripple = 0.05 * np.cos(2 * math.pi * x / 7.0)
    noisy = ProbabilityDistribution(t=0, x_min=d.x_min, P=d.P * (1 + ripple))
    rep = flatness(noisy, rect_prediction(w))
    assert rep.ripple_rms == pytest.approx(0.05 / math.sqrt(2), rel=0.05)


# --- packet tracking -----------------------------------------------------------

def gaussian_dist(center, t, sigma=8.0, half=400, mass=1.0):
    x = np.arange(-half, half + 1)
    P = mass * np.exp(-0.5 * ((x - center) / sigma) ** 2)
    return ProbabilityDistribution(t=t, x_min=-half, P=P / np.sum(P) * mass)


def test_track_single_packet():
    dists = [gaussian_dist(-0.7 * t, t) for t in range(0, 101, 20)]
    (tr,) = track_packets(dists)
    assert tr.velocity == pytest.approx(-0.7, abs=1e-9)
    assert tr.residual_rms < 1e-9
    assert tr.mass == pytest.approx(1.0, rel=1e-12)


def test_track_two_packets_labels_left_first():
    def two(t):
        a = gaussian_dist(-0.7 * t - 60, t, mass=0.6)
        b = gaussian_dist(+0.7 * t + 60, t, mass=0.4)
        return ProbabilityDistribution(t=t, x_min=a.x_min, P=a.P + b.P)

    dists = [two(t) for t in range(0, 101, 25)]
    tracks = track_packets(dists)
    assert len(tracks) == 2
    assert tracks[0].velocity == pytest.approx(-0.7, abs=0.01)
    assert tracks[1].velocity == pytest.approx(+0.7, abs=0.01)
    assert tracks[0].mass == pytest.approx(0.6, rel=1e-6)
    assert tracks[1].mass == pytest.approx(0.4, rel=1e-6)


def test_track_rejects_overlapping_packets():
    def blended(t):
        a = gaussian_dist(-12, t, sigma=10)
        b = gaussian_dist(+12, t, sigma=10)
        return ProbabilityDistribution(t=t, x_min=a.x_min, P=(a.P + b.P) / 2)

    with pytest.raises(PacketSeparationError):
        track_packets([blended(0), blended(10)])


def test_track_requires_two_samples():
    with pytest.raises(ValueError):
        track_packets([gaussian_dist(0, 0)])


def test_resting_packet_velocity_zero():
    spec = InitialConditionSpec(
        envelope=EnvelopeSpec(family="gaussian", sigma0=10),
        carrier_k0=math.pi / 2, coin=CoinChoice(k0=math.pi / 2, s=1),
    )
    st0 = build(spec, COIN)
    dists = [probability(exact_evolve(st0, COIN, t)) for t in range(0, 401, 100)]
    (tr,) = track_packets(dists)
    assert abs(tr.velocity) < 0.01


def test_width_ratio_tracks_law():
    spec = InitialConditionSpec(
        envelope=EnvelopeSpec(family="gaussian", sigma0=10),
        carrier_k0=math.pi / 2, coin=CoinChoice(k0=math.pi / 2, s=1),
    )
    st0 = build(spec, COIN)
    std0 = moments(probability(st0)).std
    tn = 10.0**2 * math.tan(COIN.theta)
    for t in (100, 300, 500):
        std = moments(probability(exact_evolve(st0, COIN, t))).std
        assert std / std0 == pytest.approx(float(width_law(t, 10.0, COIN)), rel=0.03)
    for t in (800, 1200):
        assert t > 5 * tn
        std = moments(probability(exact_evolve(st0, COIN, t))).std
        assert std / std0 == pytest.approx(float(width_law(t, 10.0, COIN)), rel=0.05)


# --- distances -------------------------------------------------------------------

def test_distance_identity_and_disjoint():
    a = rect_distribution(11)
    assert distance(a, a, "L1") == 0.0
    assert distance(a, a, "Linf") == 0.0
    b = rect_distribution(11, x0=100)
    assert distance(a, b, "L1") == pytest.approx(2.0, rel=1e-12)


def test_distance_engines_agree():
    spec = InitialConditionSpec(
        envelope=EnvelopeSpec(family="delta"), carrier_k0=0.0,
        coin=CoinChoice(spinor=(1, 0)),
    )
    st0 = build(spec, COIN)
    d_map = probability(evolve(st0, COIN, 100))
    d_spec = probability(exact_evolve(st0, COIN, 100))
    assert distance(d_map, d_spec, "L1") < 1e-9


def test_distance_validates_metric():
    a = rect_distribution(11)
    with pytest.raises(ValueError):
        distance(a, a, "L2")
