"""Exact lattice dynamics of the coined walk on the integer line.

The walker carries a two-component coin amplitude (R, L) per site x.  One
time step mixes the components with a bias-angle rotation and shifts the
R part one site left and the L part one site right:

    R'[x] = R[x+1] * cos(theta) + L[x+1] * sin(theta)
    L'[x] = R[x-1] * sin(theta) - L[x-1] * cos(theta)

The map is unitary for every theta.  States live on a dense window that
grows by one site per side per step, so the propagation speed of one site
per step can never push amplitude off the edge.  All operations are pure:
inputs are never mutated and evolution never renormalizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, tolerances
from .errors import WindowLimitError


@dataclass(frozen=True)
class CoinParameter:
    """Bias angle of the coin toss, in radians, within [0, pi/2].

    theta = pi/4 is the unbiased (Hadamard) coin.  The endpoints are legal
    here (the map stays unitary) even though the closed-form spectral
    machinery requires the open interval.
    """

    theta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta!r}")

    @property
    def c(self) -> float:
        return math.cos(self.theta)

    @property
    def s(self) -> float:
        return math.sin(self.theta)


@dataclass(frozen=True)
class WalkerState:
    """Two-component complex amplitudes on the window [x_min, x_max].

    ``R[i]`` and ``L[i]`` are the amplitudes at site ``x_min + i``.  States
    built through :meth:`from_components` are normalized and padded with
    one exactly-zero site per side; evolution preserves both properties.
    The plain constructor performs shape checks only, so tests can build
    unnormalized states.
    """

    t: int
    x_min: int
    R: np.ndarray
    L: np.ndarray

    def __post_init__(self) -> None:
        R = np.ascontiguousarray(self.R, dtype=np.complex128)
        L = np.ascontiguousarray(self.L, dtype=np.complex128)
        if R.ndim != 1 or R.shape != L.shape or R.size == 0:
            raise ValueError("R and L must be 1-D arrays of equal nonzero length")
        if self.t < 0:
            raise ValueError("time step must be non-negative")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "L", L)

    @classmethod
    def from_components(
        cls, R, L, x_min: int = 0, t: int = 0
    ) -> "WalkerState":
        """Build a normalized state, zero-padded by one site per side."""
        R = np.asarray(R, dtype=np.complex128).ravel()
        L = np.asarray(L, dtype=np.complex128).ravel()
        if R.shape != L.shape:
            raise ValueError("R and L must have the same length")
        nrm = math.sqrt(float(np.sum(np.abs(R) ** 2 + np.abs(L) ** 2)))
        if nrm == 0.0:
            raise ValueError("cannot normalize a zero state")
        R = R / nrm
        L = L / nrm
        if R[0] != 0 or L[0] != 0 or R[-1] != 0 or L[-1] != 0:
            zero = np.zeros(1, dtype=np.complex128)
            R = np.concatenate([zero, R, zero])
            L = np.concatenate([zero, L, zero])
            x_min -= 1
        return cls(t=t, x_min=x_min, R=R, L=L)

    @property
    def x_max(self) -> int:
        return self.x_min + self.R.size - 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_max + 1)

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.R) ** 2 + np.abs(self.L) ** 2)))


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Occupation probabilities P[x] = |R[x]|^2 + |L[x]|^2 on a window."""

    t: int
    x_min: int
    P: np.ndarray

    def __post_init__(self) -> None:
        P = np.ascontiguousarray(self.P, dtype=np.float64)
        if P.ndim != 1 or P.size == 0:
            raise ValueError("P must be a non-empty 1-D array")
        if np.any(P < 0):
            raise ValueError("probabilities must be non-negative")
        object.__setattr__(self, "P", P)

    @property
    def x_max(self) -> int:
        return self.x_min + self.P.size - 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_max + 1)

    def total(self) -> float:
        return float(np.sum(self.P))


def step(state: WalkerState, coin: CoinParameter) -> WalkerState:
    """Apply one coin-and-shift map; the window grows by one site per side."""
    return evolve(state, coin, 1)


def evolve(
    state: WalkerState,
    coin: CoinParameter,
    steps: int,
    max_window: int = tolerances.MAX_WINDOW_SITES,
) -> WalkerState:
    """Apply the map ``steps`` times.

    Equivalent to composing :func:`step` ``steps`` times, but runs the
    whole loop inside the selected kernel.  Never renormalizes.  Raises
    :class:`WindowLimitError` if the final window would exceed
    ``max_window`` sites.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if steps == 0:
        return state
    n = state.R.size
    out_n = n + 2 * steps
    if out_n > max_window:
        raise WindowLimitError(
            f"evolving {steps} steps would need a {out_n}-site window "
            f"(cap {max_window})"
        )
    # Scratch buffers carry one guaranteed-zero cell beyond the final
    # window so the kernel's stencil never reads past the end.
    buf_n = out_n + 2
    ra = np.zeros(buf_n, dtype=np.complex128)
    la = np.zeros(buf_n, dtype=np.complex128)
    rb = np.zeros(buf_n, dtype=np.complex128)
    lb = np.zeros(buf_n, dtype=np.complex128)
    ra[steps + 1 : steps + 1 + n] = state.R
    la[steps + 1 : steps + 1 + n] = state.L
    which, lo, hi = kernels.run_map(
        ra, la, rb, lb, coin.c, coin.s, steps + 1, steps + n, steps
    )
    R, L = (ra, la) if which == 0 else (rb, lb)
    assert lo == 1 and hi == buf_n - 2
    return WalkerState(
        t=state.t + steps,
        x_min=state.x_min - steps,
        R=R[1 : buf_n - 1].copy(),
        L=L[1 : buf_n - 1].copy(),
    )


def probability(state: WalkerState) -> ProbabilityDistribution:
    """Site occupation probabilities; sums to the squared state norm."""
    P = np.abs(state.R) ** 2 + np.abs(state.L) ** 2
    return ProbabilityDistribution(t=state.t, x_min=state.x_min, P=P)
