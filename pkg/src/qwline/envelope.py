"""Slow-envelope dynamics on the real line.

A narrow-band lattice excitation rides a carrier exp(i*k0*x) on one
frequency branch; its envelope F(x, t) then obeys a wave equation whose
coefficients are the derivatives of the dispersion relation at k0.  In
spectral form the envelope just accumulates the phase

    F(K, t) = F(K, 0) * exp(-i * s * Omega(K) * t),

where Omega(K) = w(k0 + K) - w(k0) and s is the branch sign.  Truncating
Omega at first order gives pure advection at the group velocity, at
second order the free-Schroedinger (paraxial diffraction) equation, and
at third order the leading deformation correction; "exact" keeps the full
phase.  Closed-form companions: the spreading Gaussian, the far-field
flat-top prediction for sinc envelopes, and the self-imaging period of
periodic envelopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import tolerances
from .errors import BoundaryLeakError, DomainError
from .spectral import _require_open_theta, omega, omega_derivative
from .walk import CoinParameter

TruncationOrder = Union[int, str]

TRUNCATION_ORDERS = (1, 2, 3, "exact")


def _require_trunc(trunc: TruncationOrder) -> None:
    if trunc not in TRUNCATION_ORDERS:
        raise ValueError(f"truncation must be one of {TRUNCATION_ORDERS}, got {trunc!r}")


def _require_branch(s: int) -> None:
    if s not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {s!r}")


@dataclass(frozen=True)
class EnvelopeField:
    """Complex envelope samples on a uniform grid.

    ``grid`` holds the sample positions (spacing h <= 1; h = 1 matches
    lattice sites), ``values`` the complex amplitudes.  Normalization is
    sum(h * |F|^2) = 1.  Use :meth:`from_samples` to normalize raw data.
    """

    grid: np.ndarray
    values: np.ndarray
    carrier: float
    branch: int
    time: float = 0.0

    def __post_init__(self) -> None:
        grid = np.ascontiguousarray(self.grid, dtype=np.float64)
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if grid.ndim != 1 or grid.size < 2 or grid.shape != values.shape:
            raise ValueError("grid and values must be matching 1-D arrays")
        dx = np.diff(grid)
        h = dx[0]
        if not np.allclose(dx, h, rtol=0, atol=1e-9 * max(abs(h), 1.0)):
            raise ValueError("grid must be uniformly spaced")
        if h <= 0 or h > 1.0 + 1e-12:
            raise ValueError(f"grid spacing must lie in (0, 1], got {h!r}")
        _require_branch(self.branch)
        if self.time < 0:
            raise ValueError("time must be non-negative")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_samples(
        cls, grid, values, carrier: float, branch: int, time: float = 0.0
    ) -> "EnvelopeField":
        """Normalize raw samples so that sum(h * |F|^2) = 1."""
        grid = np.asarray(grid, dtype=np.float64)
        values = np.asarray(values, dtype=np.complex128)
        h = float(grid[1] - grid[0])
        nrm = math.sqrt(h * float(np.sum(np.abs(values) ** 2)))
        if nrm == 0.0:
            raise ValueError("cannot normalize a zero envelope")
        return cls(grid=grid, values=values / nrm, carrier=carrier,
                   branch=branch, time=time)

    @property
    def h(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def density(self) -> np.ndarray:
        """Probability density |F|^2 on the grid."""
        return np.abs(self.values) ** 2

    def norm_squared(self) -> float:
        return self.h * float(np.sum(self.density()))


def _phase_polynomial(K: np.ndarray, k0: float, coin: CoinParameter,
                      trunc: TruncationOrder) -> np.ndarray:
    """Omega(K) truncated at the requested order, evaluated on K."""
    if trunc == "exact":
        return np.asarray(omega(k0 + K, coin) - omega(k0, coin))
    out = np.zeros_like(K)
    fact = 1.0
    for n in range(1, int(trunc) + 1):
        fact *= n
        out += omega_derivative(k0, coin, n) * K ** n / fact
    return out


def propagate_envelope(
    field: EnvelopeField,
    coin: CoinParameter,
    dt: float,
    trunc: TruncationOrder,
    periodic: bool = False,
) -> EnvelopeField:
    """Advance the envelope by ``dt`` with a phase-only spectral multiplier.

    The norm is conserved exactly.  On non-periodic grids the amplitude
    at both grid ends must stay below the edge-leak threshold before and
    after the jump, otherwise :class:`BoundaryLeakError` is raised;
    periodic grids (self-imaging studies) skip the check.
    """
    _require_open_theta(coin)
    _require_trunc(trunc)
    if dt < 0:
        raise ValueError("dt must be non-negative")
    if not periodic:
        _check_edges(field.values, "before propagation")
    n = field.grid.size
    K = 2.0 * math.pi * np.fft.fftfreq(n, d=field.h)
    phase = _phase_polynomial(K, field.carrier, coin, trunc)
    spec = np.fft.fft(field.values)
    spec *= np.exp(-1j * field.branch * phase * dt)
    values = np.fft.ifft(spec)
    if not periodic:
        _check_edges(values, "after propagation")
    return EnvelopeField(
        grid=field.grid,
        values=values,
        carrier=field.carrier,
        branch=field.branch,
        time=field.time + dt,
    )


def _check_edges(values: np.ndarray, when: str) -> None:
    edge = max(abs(values[0]), abs(values[-1]))
    if edge > tolerances.EDGE_LEAK_ATOL:
        raise BoundaryLeakError(
            f"envelope edge amplitude {edge:.3e} {when}: enlarge the grid"
        )


def width_law(t, sigma0: float, coin: CoinParameter):
    """Relative width w(t) = sqrt(1 + (t / (sigma0^2 tan theta))^2).

    Growth of a Gaussian envelope's probability width under the paraxial
    truncation at a resting carrier; branch independent.  Accepts scalar
    or array ``t``.  Asymptotic slope dw/dt -> 1/(sigma0^2 tan theta).
    """
    _require_open_theta(coin)
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive")
    tau = np.asarray(t, dtype=np.float64) / (sigma0 ** 2 * math.tan(coin.theta))
    out = np.sqrt(1.0 + tau ** 2)
    return out if out.ndim else float(out)


def gaussian_envelope_analytic(
    sigma0: float,
    x0: float,
    coin: CoinParameter,
    s: int,
    t: float,
    grid: np.ndarray | None = None,
) -> EnvelopeField:
    """Closed-form spreading Gaussian under the paraxial truncation.

    F(x, t) = N / q * exp(-(x - x0)^2 / (2 (sigma0 q)^2)) with the complex
    spreading parameter q(t) = sqrt(1 + i s t / (sigma0^2 tan theta)); the
    1/q prefactor carries the spreading phase so the result matches
    spectral propagation including phase.  |F|^2 stays Gaussian with
    width sigma0 * w(t).
    """
    _require_open_theta(coin)
    _require_branch(s)
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive")
    if t < 0:
        raise ValueError("t must be non-negative")
    q = np.sqrt(1.0 + 1j * s * t / (sigma0 ** 2 * math.tan(coin.theta)))
    if grid is None:
        half = int(math.ceil(8.0 * sigma0 * float(width_law(t, sigma0, coin)))) + 8
        grid = np.arange(-half, half + 1, dtype=np.float64) + x0
    u = (np.asarray(grid, dtype=np.float64) - x0) / (sigma0 * q)
    values = np.exp(-0.5 * u ** 2) / q
    return EnvelopeField.from_samples(grid, values, carrier=math.pi / 2,
                                      branch=s, time=t)


@dataclass(frozen=True)
class FlatTopPrediction:
    """Far-field plateau of a sinc envelope of width ``sigma0``.

    The plateau has width w = 2 pi t / (sigma0 tan theta), uniform level
    1/w, and standard deviation w / sqrt(12).  ``transient`` flags times
    before t = 2 sigma0^2 tan theta, where the asymptotic form has not
    settled yet.
    """

    sigma0: float
    theta: float
    t: float
    w: float
    level: float
    std: float
    transient: bool


def flat_top_prediction(sigma0: float, coin: CoinParameter, t: float) -> FlatTopPrediction:
    """Stationary-phase plateau prediction (a prediction object, not a solver)."""
    _require_open_theta(coin)
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive")
    if t <= 0:
        raise ValueError("t must be positive")
    tn = math.tan(coin.theta)
    w = 2.0 * math.pi * t / (sigma0 * tn)
    return FlatTopPrediction(
        sigma0=sigma0,
        theta=coin.theta,
        t=t,
        w=w,
        level=1.0 / w,
        std=w / math.sqrt(12.0),
        transient=t < 2.0 * sigma0 ** 2 * tn,
    )


@dataclass(frozen=True)
class SincSpectrumReport:
    """Numerical flatness check of the integer-sampled sinc spectrum."""

    sigma0: float
    n: int
    passband_edge: float
    inband_ripple_rms: float
    out_of_band_fraction: float


def sinc_spectrum_check(sigma0: float, n: int = 4096) -> SincSpectrumReport:
    """Confirm the spectrum of sinc(x / sigma0) on integers is a band of
    half-width pi / sigma0.

    Needs sigma0 >= 2 so the band fits inside (-pi, pi) without aliasing.
    Reports the relative in-band magnitude ripple and the energy fraction
    that leaks outside the band (truncation to ``n`` samples is the only
    leak source).
    """
    if sigma0 < 2:
        raise ValueError("sigma0 must be at least 2 (aliasing-free band)")
    x = np.arange(n) - n // 2
    f = np.sinc(x / sigma0)
    spec = np.fft.fft(f)
    k = 2.0 * math.pi * np.fft.fftfreq(n)
    edge = math.pi / sigma0
    inband = np.abs(k) < edge
    mag = np.abs(spec)
    ripple = float(np.std(mag[inband]) / np.mean(mag[inband]))
    energy = mag ** 2
    out_frac = float(np.sum(energy[~inband]) / np.sum(energy))
    return SincSpectrumReport(
        sigma0=float(sigma0),
        n=n,
        passband_edge=edge,
        inband_ripple_rms=ripple,
        out_of_band_fraction=out_frac,
    )


def talbot_period(lam: float, coin: CoinParameter) -> float:
    """Self-imaging period T = lam^2 tan(theta) / (2 pi) of a periodic envelope.

    Under the paraxial truncation a lam-periodic envelope reproduces its
    probability pattern at integer multiples of T.  At odd multiples the
    reproduction holds up to a global translation by lam/2 for a general
    profile; profiles built from odd harmonics of lam reproduce in place.
    """
    _require_open_theta(coin)
    if lam <= 0:
        raise ValueError("lam must be positive")
    return lam ** 2 * math.tan(coin.theta) / (2.0 * math.pi)
