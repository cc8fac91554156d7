"""Plane-wave machinery for the lattice walk.

Plane waves exp(i(kx - w t)) diagonalize the coin-and-shift map.  There
are two frequency branches per wavenumber,

    w(+)(k) = w(k) = -arcsin(cos(theta) * sin(k)),   w(-)(k) = pi - w(k),

with orthonormal coin eigenvectors.  This module provides the dispersion
relation and its closed-form derivatives (group velocity and higher), the
eigenspinors, ring decompositions of lattice states onto the eigenbasis,
and an exact FFT-based propagator equivalent to iterating the map.

Conventions: the forward transform uses exp(-ikx); the inverse carries
the 1/N factor.  Flipping either sign silently reverses the propagation
direction, so both are fixed here and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import tolerances
from .errors import DegenerateSpinorError, DomainError, RingSizeError
from .walk import CoinParameter, WalkerState

Branch = Literal[1, -1]


def _require_open_theta(coin: CoinParameter) -> None:
    if not 0.0 < coin.theta < math.pi / 2:
        raise DomainError(
            f"theta must lie strictly inside (0, pi/2); got {coin.theta!r}"
        )


def _require_branch(s: int) -> None:
    if s not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {s!r}")


def omega(k, coin: CoinParameter):
    """Dispersion relation of the (+) branch, in [-pi/2, pi/2].

    Accepts scalars or arrays; odd in k and 2*pi periodic.
    """
    return -np.arcsin(coin.c * np.sin(k))


def branch_omega(k, coin: CoinParameter, s: int):
    """Frequency of branch ``s``: w for +1 and pi - w for -1."""
    _require_branch(s)
    w = omega(k, coin)
    return w if s == 1 else math.pi - w


def omega_derivative(k, coin: CoinParameter, order: int):
    """Closed-form d^n w / dk^n for n in {1, 2, 3}.

    Order 1 is the group velocity -cos(theta) cos(k) / sqrt(D) with
    D = 1 - cos^2(theta) sin^2(k).  Requires theta strictly inside
    (0, pi/2) so D stays positive.
    """
    _require_open_theta(coin)
    c = coin.c
    s2 = coin.s ** 2
    k = np.asarray(k, dtype=np.float64)
    sk = np.sin(k)
    ck = np.cos(k)
    D = 1.0 - (c * sk) ** 2
    if order == 1:
        out = -c * ck / np.sqrt(D)
    elif order == 2:
        out = c * s2 * sk / D ** 1.5
    elif order == 3:
        out = c * s2 * ck * (D + 3.0 * (c * sk) ** 2) / D ** 2.5
    else:
        raise ValueError(f"order must be 1, 2 or 3, got {order!r}")
    return out if out.ndim else float(out)


def plane_wave_step(k: float, coin: CoinParameter) -> np.ndarray:
    """2x2 matrix the map applies to the coin vector of exp(ikx)."""
    eik = np.exp(1j * k)
    return np.array(
        [[eik * coin.c, eik * coin.s], [coin.s / eik, -coin.c / eik]],
        dtype=np.complex128,
    )


@dataclass(frozen=True)
class Eigenspinor:
    """Normalized coin eigenvector at wavenumber ``k`` on branch ``s``.

    The plane wave exp(ikx) carrying ``components`` picks up the phase
    exp(-i * omega_s) under one map step.
    """

    k: float
    s: int
    omega_s: float
    components: np.ndarray


def _spinor_grid(k: np.ndarray, coin: CoinParameter, s: int) -> np.ndarray:
    """Normalized eigenspinors for an array of wavenumbers; shape (2, len(k))."""
    w = omega(k, coin)
    top = coin.c * np.cos(k) + s * np.cos(w)
    bot = np.exp(-1j * k) * coin.s
    vec = np.vstack([top.astype(np.complex128), bot])
    nrm = np.sqrt(np.sum(np.abs(vec) ** 2, axis=0))
    if np.any(nrm < 1e-12):
        raise DegenerateSpinorError("eigenspinor norm vanished")
    return vec / nrm


def eigenspinor(k: float, coin: CoinParameter, s: int) -> Eigenspinor:
    """Normalized eigenspinor (cos(theta)cos(k) + s*cos(w), e^{-ik}sin(theta))."""
    _require_open_theta(coin)
    _require_branch(s)
    vec = _spinor_grid(np.array([k], dtype=np.float64), coin, s)[:, 0]
    return Eigenspinor(
        k=float(k), s=s, omega_s=float(branch_omega(k, coin, s)), components=vec
    )


def ring_wavenumbers(N: int) -> np.ndarray:
    """The N wavenumbers 2*pi*j/N mapped to (-pi, pi]."""
    j = np.arange(N)
    j = np.where(j <= N // 2, j, j - N)
    return 2.0 * math.pi * j / N


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenbasis coefficients of a state on an N-site ring.

    ``a_plus[j]`` and ``a_minus[j]`` are the projections of the forward
    transform onto the two eigenspinors at ``k[j]``.  Parseval:
    sum(|a+|^2 + |a-|^2)/N equals the squared state norm.
    """

    k: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray

    @property
    def N(self) -> int:
        return self.k.size


def _ring_transform(state: WalkerState, N: int) -> np.ndarray:
    """Forward transform of both components on the ring; shape (2, N)."""
    ring = np.zeros((2, N), dtype=np.complex128)
    idx = np.mod(state.positions, N)
    ring[0, idx] = state.R
    ring[1, idx] = state.L
    return np.fft.fft(ring, axis=1)


def decompose(state: WalkerState, N: int, coin: CoinParameter) -> SpectralDecomposition:
    """Project a state onto the ring eigenbasis of size ``N``.

    ``N`` must be at least the window width so distinct sites map to
    distinct ring points.
    """
    _require_open_theta(coin)
    width = state.R.size
    if N < width:
        raise RingSizeError(f"ring size {N} smaller than window width {width}")
    psi_k = _ring_transform(state, N)
    k = ring_wavenumbers(N)
    a = []
    for s in (1, -1):
        phi = _spinor_grid(k, coin, s)
        a.append(np.sum(np.conj(phi) * psi_k, axis=0))
    return SpectralDecomposition(k=k, a_plus=a[0], a_minus=a[1])


def min_ring_size(width: int, t: int) -> int:
    """Smallest ring that provably avoids wraparound: width + 2t + 2."""
    return width + 2 * t + 2


def _next_fast_size(n: int) -> int:
    return 1 << (max(n, 2) - 1).bit_length()


def exact_evolve(
    state: WalkerState, coin: CoinParameter, t: int, N: int | None = None
) -> WalkerState:
    """Advance ``t`` steps through the eigenbasis instead of iterating.

    Each coefficient picks up exp(-i * w_s(k) * t); the inverse transform
    is then re-windowed to the light cone [x_min - t, x_max + t].  The
    ring must satisfy N >= width + 2t + 2 so wraparound cannot reach the
    light cone; by default the next power of two is used.
    """
    _require_open_theta(coin)
    if t < 0:
        raise ValueError("t must be non-negative")
    width = state.R.size
    need = min_ring_size(width, t)
    if N is None:
        N = _next_fast_size(need)
    elif N < need:
        raise RingSizeError(
            f"ring size {N} risks wraparound: need at least {need} "
            f"for width {width} and t {t}"
        )
    psi_k = _ring_transform(state, N)
    k = ring_wavenumbers(N)
    out_k = np.zeros_like(psi_k)
    for s in (1, -1):
        phi = _spinor_grid(k, coin, s)
        a = np.sum(np.conj(phi) * psi_k, axis=0)
        a = a * np.exp(-1j * branch_omega(k, coin, s) * t)
        out_k += phi * a
    out = np.fft.ifft(out_k, axis=1)
    x = np.arange(state.x_min - t, state.x_min - t + width + 2 * t)
    idx = np.mod(x, N)
    return WalkerState(
        t=state.t + t, x_min=state.x_min - t, R=out[0, idx], L=out[1, idx]
    )
