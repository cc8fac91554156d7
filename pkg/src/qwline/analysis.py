"""Distribution measurements: moments, parity, plateau flatness, packet
tracking, and distances between distributions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances
from .envelope import FlatTopPrediction
from .errors import PacketSeparationError, TransientError
from .walk import ProbabilityDistribution


@dataclass(frozen=True)
class Moments:
    mean: float
    std: float
    total: float


def moments(dist: ProbabilityDistribution) -> Moments:
    """Mean and standard deviation of the position, weighted by P."""
    total = dist.total()
    if total <= 0:
        raise ValueError("distribution carries no probability")
    x = dist.positions.astype(np.float64)
    mean = float(np.sum(x * dist.P) / total)
    var = float(np.sum((x - mean) ** 2 * dist.P) / total)
    return Moments(mean=mean, std=math.sqrt(max(var, 0.0)), total=total)


def parity_zeros(dist: ProbabilityDistribution, t: int) -> bool:
    """True iff every site of the wrong parity is empty.

    A walker launched from a single site at x = 0 can only occupy sites
    with x + t even; this checks the complementary sites against the
    double-precision noise floor.
    """
    odd = (dist.positions + t) % 2 != 0
    return bool(np.all(dist.P[odd] < tolerances.PARITY_ATOL))


@dataclass(frozen=True)
class FlatnessReport:
    """Plateau metrics against a flat-top prediction.

    ``plateau_window`` is the central fraction of the predicted width the
    metrics are computed over; ``ripple_rms`` the relative rms deviation
    from the window mean; ``level_error`` the relative mismatch between
    the window mean and the predicted uniform level; ``edge_sharpness``
    the distance (sites) over which the smoothed profile falls from 90%
    to 10% of the plateau mean, averaged over both edges.
    """

    predicted_w: float
    plateau_window: float
    plateau_mean: float
    ripple_rms: float
    level_error: float
    edge_sharpness: float


def _smooth(P: np.ndarray, width: int) -> np.ndarray:
    if width <= 1:
        return P
    kernel = np.ones(width) / width
    return np.convolve(P, kernel, mode="same")


def _edge_fall_distance(x: np.ndarray, P: np.ndarray, center: float,
                        level: float, side: int) -> float:
    """Distance between the 0.9*level and 0.1*level crossings on one side."""
    order = np.argsort(side * (x - center))
    xo, po = x[order], P[order]
    outward = side * (xo - center) >= 0
    xo, po = xo[outward], po[outward]
    pos = {}
    for frac in (0.9, 0.1):
        thr = frac * level
        below = np.nonzero(po < thr)[0]
        if below.size == 0 or below[0] == 0:
            return math.nan
        i = below[0]
        x1, x2 = xo[i - 1], xo[i]
        p1, p2 = po[i - 1], po[i]
        frac_pos = x1 + (p1 - thr) / (p1 - p2) * (x2 - x1) if p1 != p2 else x1
        pos[frac] = frac_pos
    return abs(pos[0.1] - pos[0.9])


def flatness(
    dist: ProbabilityDistribution,
    prediction: FlatTopPrediction,
    rho: float = 0.8,
) -> FlatnessReport:
    """Measure plateau homogeneity over the central ``rho`` fraction of the
    predicted width, centered on the distribution mean."""
    if not 0.0 < rho <= 1.0:
        raise ValueError("rho must lie in (0, 1]")
    if prediction.transient:
        raise TransientError(
            "flatness metrics are undefined before the plateau forms "
            f"(t < 2 sigma0^2 tan theta = {2 * prediction.sigma0**2 * math.tan(prediction.theta):.1f})"
        )
    m = moments(dist).mean
    half = 0.5 * rho * prediction.w
    x = dist.positions.astype(np.float64)
    if m - half < dist.x_min or m + half > dist.x_max:
        raise ValueError("plateau window exceeds the distribution support")
    window = np.abs(x - m) <= half
    pw = dist.P[window]
    plateau_mean = float(np.mean(pw))
    ripple_rms = float(np.sqrt(np.mean(((pw - plateau_mean) / plateau_mean) ** 2)))
    level_error = abs(plateau_mean - prediction.level) / prediction.level
    smooth_width = max(3, 2 * int(prediction.w / 400) + 1)
    Ps = _smooth(dist.P, smooth_width)
    falls = [
        _edge_fall_distance(x, Ps, m, plateau_mean, side) for side in (-1, +1)
    ]
    falls = [f for f in falls if not math.isnan(f)]
    edge = float(np.mean(falls)) if falls else math.nan
    return FlatnessReport(
        predicted_w=prediction.w,
        plateau_window=rho,
        plateau_mean=plateau_mean,
        ripple_rms=ripple_rms,
        level_error=level_error,
        edge_sharpness=edge,
    )


def half_level_width(dist: ProbabilityDistribution, level: float) -> float:
    """Width of the region where the smoothed profile exceeds level / 2.

    Used to measure a plateau's extent; for an ideal rectangular profile
    of height ``level`` this returns the exact width.
    """
    P = _smooth(dist.P, 33) if dist.P.size > 200 else dist.P
    x = dist.positions.astype(np.float64)
    above = np.nonzero(P >= 0.5 * level)[0]
    if above.size == 0:
        return 0.0
    return float(x[above[-1]] - x[above[0]] + 1.0)


@dataclass(frozen=True)
class PacketTrack:
    """Linear fit of one packet's centroid against time."""

    velocity: float
    intercept: float
    residual_rms: float
    mass: float


def _split_points(P: np.ndarray, gap_frac: float, floor_frac: float) -> list[int]:
    """Index splitting P between two packets, or [] for a single packet.

    Raises when two significant maxima exist but the valley between them
    stays above ``gap_frac`` of the peak (packets not separable).
    """
    peak = float(P.max())
    maxima = []
    for i in range(1, P.size - 1):
        if P[i] >= P[i - 1] and P[i] > P[i + 1] and P[i] > floor_frac * peak:
            maxima.append(i)
    if len(maxima) < 2:
        return []
    maxima.sort(key=lambda i: P[i], reverse=True)
    i1, i2 = sorted(maxima[:2])
    valley = int(np.argmin(P[i1 : i2 + 1])) + i1
    if P[valley] > gap_frac * peak:
        raise PacketSeparationError(
            f"two maxima with valley at {P[valley] / peak:.2f} of peak "
            f"(needs < {gap_frac})"
        )
    return [valley]


def track_packets(
    dists: Sequence[ProbabilityDistribution],
    smooth: int = 9,
    gap_frac: float = 0.1,
    floor_frac: float = 0.2,
) -> list[PacketTrack]:
    """Fit each packet's centroid velocity over a time series.

    Distributions must contain either one packet or two packets separated
    by a valley below ``gap_frac`` of the peak, consistently across all
    samples.  Packets are labeled left to right.  Returns one track per
    packet with the least-squares velocity, fit residual, and mean mass.
    """
    if len(dists) < 2:
        raise ValueError("need at least two time samples")
    times = np.array([d.t for d in dists], dtype=np.float64)
    n_packets = None
    centroids: list[list[float]] = []
    masses: list[list[float]] = []
    for d in dists:
        Ps = _smooth(d.P, smooth)
        x = d.positions.astype(np.float64)
        splits = _split_points(Ps, gap_frac, floor_frac)
        pieces = np.split(np.arange(d.P.size), splits)
        if n_packets is None:
            n_packets = len(pieces)
            centroids = [[] for _ in range(n_packets)]
            masses = [[] for _ in range(n_packets)]
        elif len(pieces) != n_packets:
            raise PacketSeparationError(
                f"packet count changed from {n_packets} to {len(pieces)} at t={d.t}"
            )
        for j, idx in enumerate(pieces):
            mass = float(np.sum(d.P[idx]))
            if mass <= 0:
                raise PacketSeparationError(f"empty packet {j} at t={d.t}")
            centroids[j].append(float(np.sum(x[idx] * d.P[idx]) / mass))
            masses[j].append(mass)
    tracks = []
    for j in range(n_packets):
        coeff, res = np.polyfit(times, centroids[j], 1), None
        fit = np.polyval(coeff, times)
        res = float(np.sqrt(np.mean((np.asarray(centroids[j]) - fit) ** 2)))
        tracks.append(
            PacketTrack(
                velocity=float(coeff[0]),
                intercept=float(coeff[1]),
                residual_rms=res,
                mass=float(np.mean(masses[j])),
            )
        )
    return tracks


def distance(
    a: ProbabilityDistribution, b: ProbabilityDistribution, metric: str = "L1"
) -> float:
    """L1 or Linf distance between two distributions on the union window."""
    if metric not in ("L1", "Linf"):
        raise ValueError(f"metric must be 'L1' or 'Linf', got {metric!r}")
    lo = min(a.x_min, b.x_min)
    hi = max(a.x_max, b.x_max)
    pa = np.zeros(hi - lo + 1)
    pb = np.zeros(hi - lo + 1)
    pa[a.x_min - lo : a.x_max - lo + 1] = a.P
    pb[b.x_min - lo : b.x_max - lo + 1] = b.P
    diff = np.abs(pa - pb)
    return float(np.sum(diff) if metric == "L1" else np.max(diff))
