"""Extended initial states: envelope times carrier times a fixed coin.

A lattice state of the form

    psi[x] = N * f(x) * exp(i * c * x^2) * exp(i * k0 * x) * |C>

is assembled from an envelope family f, an optional quadratic phase, a
carrier wavenumber k0, and a site-independent coin spinor |C> given either
explicitly or as an eigenspinor selection (k0, s).  Envelopes are sampled
on integers and truncated where |f| drops below the support cutoff; the
pure sinc family decays too slowly for that rule, so its half-width is an
explicit parameter (default ``SINC_SUPPORT_FACTOR * sigma0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral, tolerances
from .errors import InvalidSpecError, NonUniformCoinError
from .walk import CoinParameter, WalkerState

FAMILIES = ("delta", "gaussian", "sinc", "sinc_gaussian", "periodic")

# Default half-width of the truncated sinc envelope, in units of sigma0.
# The tail decays like 1/x, so a magnitude cutoff alone never terminates;
# the cutoff is exposed so its effect can be studied.  Six side lobes keep
# the far-field plateau width and level accurate to a few percent while
# retaining the pronounced plateau ripples of a hard-truncated aperture.
SINC_SUPPORT_FACTOR = 6.0

# Apodizing widths of the bundled "fig2c" preset, in units of sigma0.
FIG2C_WIDTH_FACTORS = (1.1, 2.0, 3.0)


@dataclass(frozen=True)
class EnvelopeSpec:
    """Envelope family and shape parameters.

    ``sigma0`` is the width parameter (sites), ``sigmaG`` the apodizing
    Gaussian width (sinc_gaussian only), ``lambda_`` the integer period
    (periodic only; serialized as "lambda"), ``x0`` the center,
    ``quad_phase`` an optional curvature c applied as exp(i c x^2), and
    ``support`` an optional half-width override for the sampled window.
    """

    family: str
    sigma0: float | None = None
    sigmaG: float | None = None
    lambda_: int | None = None
    x0: float = 0.0
    quad_phase: float | None = None
    support: float | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise InvalidSpecError(f"unknown envelope family {self.family!r}")
        needs_sigma0 = self.family in ("gaussian", "sinc", "sinc_gaussian")
        if needs_sigma0 and (self.sigma0 is None or self.sigma0 <= 0):
            raise InvalidSpecError(f"{self.family} requires sigma0 > 0")
        if self.family == "sinc_gaussian" and (self.sigmaG is None or self.sigmaG <= 0):
            raise InvalidSpecError("sinc_gaussian requires sigmaG > 0")
        if self.family == "periodic":
            lam = self.lambda_
            if lam is None or int(lam) != lam or lam < 2:
                raise InvalidSpecError("periodic requires integer lambda >= 2")
        if self.support is not None and self.support < 0:
            raise InvalidSpecError("support must be non-negative")


@dataclass(frozen=True)
class CoinChoice:
    """Site-uniform coin: an explicit spinor or an eigenspinor selection.

    Exactly one of the two modes must be given: ``spinor`` as a pair of
    complex amplitudes (normalized on resolve), or ``k0`` plus branch
    ``s`` resolved through the plane-wave eigenbasis.
    """

    spinor: tuple[complex, complex] | None = None
    k0: float | None = None
    s: int | None = None

    def __post_init__(self) -> None:
        explicit = self.spinor is not None
        eigen = self.k0 is not None or self.s is not None
        if explicit == eigen:
            raise InvalidSpecError(
                "give either an explicit spinor or an (k0, s) eigenspinor selection"
            )
        if eigen and (self.k0 is None or self.s not in (1, -1)):
            raise InvalidSpecError("eigenspinor selection needs k0 and s in {+1,-1}")

    def resolve(self, coin: CoinParameter) -> np.ndarray:
        """Unit-norm coin spinor as a length-2 complex array."""
        if self.spinor is not None:
            vec = np.asarray(self.spinor, dtype=np.complex128)
            nrm = float(np.linalg.norm(vec))
            if nrm == 0.0:
                raise InvalidSpecError("explicit coin spinor must be nonzero")
            return vec / nrm
        return spectral.eigenspinor(self.k0, coin, self.s).components


@dataclass(frozen=True)
class InitialConditionSpec:
    """Envelope plus carrier plus coin; fully determines the initial state."""

    envelope: EnvelopeSpec
    carrier_k0: float
    coin: CoinChoice

    def __post_init__(self) -> None:
        if not -math.pi <= self.carrier_k0 <= math.pi:
            raise InvalidSpecError("carrier_k0 must lie in [-pi, pi]")


def envelope_support(spec: EnvelopeSpec) -> float:
    """Half-width of the sampled window around x0, before tail trimming."""
    if spec.support is not None:
        return float(spec.support)
    if spec.family == "delta":
        return 0.0
    cut = math.sqrt(2.0 * math.log(1.0 / tolerances.SUPPORT_CUTOFF))  # ~7.43 sigma
    if spec.family == "gaussian":
        return spec.sigma0 * cut
    if spec.family == "sinc":
        return SINC_SUPPORT_FACTOR * spec.sigma0
    if spec.family == "sinc_gaussian":
        return spec.sigmaG * cut
    raise InvalidSpecError(
        "periodic envelopes have no natural extent; give an explicit support"
    )


def sample_envelope(spec: EnvelopeSpec, x: np.ndarray) -> np.ndarray:
    """Envelope values f(x) (with any quadratic phase) at the given positions."""
    x = np.asarray(x, dtype=np.float64)
    u = x - spec.x0
    if spec.family == "delta":
        f = (u == 0).astype(np.complex128)
    elif spec.family == "gaussian":
        f = np.exp(-0.5 * (u / spec.sigma0) ** 2).astype(np.complex128)
    elif spec.family == "sinc":
        f = np.sinc(u / spec.sigma0).astype(np.complex128)
    elif spec.family == "sinc_gaussian":
        f = (np.sinc(u / spec.sigma0)
             * np.exp(-0.5 * (u / spec.sigmaG) ** 2)).astype(np.complex128)
    elif spec.family == "periodic":
        # Packaged test pattern: first plus third harmonic.  Odd harmonics
        # keep the self-imaging identity exact at every multiple of the
        # period (even-harmonic content would reproduce shifted by half a
        # period at odd multiples).
        q = 2.0 * math.pi / spec.lambda_
        f = (np.cos(q * u) + 0.5 * np.cos(3.0 * q * u)).astype(np.complex128)
    else:  # pragma: no cover - guarded by EnvelopeSpec
        raise InvalidSpecError(f"unknown envelope family {spec.family!r}")
    if spec.quad_phase is not None:
        f = f * np.exp(1j * spec.quad_phase * x ** 2)
    return f


def build(spec: InitialConditionSpec, coin: CoinParameter) -> WalkerState:
    """Assemble the normalized lattice state at t = 0.

    ``coin`` supplies the bias angle needed to resolve eigenspinor coin
    selections; it is unused for explicit spinors.
    """
    env = spec.envelope
    half = int(math.ceil(envelope_support(env)))
    center = int(round(env.x0))
    x = np.arange(center - half, center + half + 1)
    f = sample_envelope(env, x)
    keep = np.abs(f) >= tolerances.SUPPORT_CUTOFF
    if not np.any(keep):
        raise InvalidSpecError("envelope vanishes everywhere on its window")
    first, last = np.nonzero(keep)[0][[0, -1]]
    x = x[first : last + 1]
    f = f[first : last + 1]
    spinor = spec.coin.resolve(coin)
    psi = f * np.exp(1j * spec.carrier_k0 * x)
    return WalkerState.from_components(
        psi * spinor[0], psi * spinor[1], x_min=int(x[0])
    )


def fig2c_specs(
    sigma0: float, carrier_k0: float, coin: CoinChoice,
    factors: tuple[float, ...] = FIG2C_WIDTH_FACTORS,
) -> list[InitialConditionSpec]:
    """Apodized-sinc family of the bundled fig2c preset, one per width."""
    return [
        InitialConditionSpec(
            envelope=EnvelopeSpec(
                family="sinc_gaussian", sigma0=sigma0, sigmaG=fac * sigma0
            ),
            carrier_k0=carrier_k0,
            coin=coin,
        )
        for fac in factors
    ]


def branch_weights(
    state: WalkerState, k0: float, coin: CoinParameter
) -> tuple[float, float]:
    """Projection weights of the state's coin part on the two branches at k0.

    Requires the coin part to be site-uniform (identical spinor direction
    at every occupied site, as produced by :func:`build`); otherwise the
    weights are undefined and :class:`NonUniformCoinError` is raised.
    Returns (weight_plus, weight_minus), summing to 1.
    """
    psi = np.vstack([state.R, state.L])
    gram = psi @ psi.conj().T
    evals, evecs = np.linalg.eigh(gram)
    if evals[0] > tolerances.COIN_RANK_RTOL * evals[1]:
        raise NonUniformCoinError(
            "coin part varies across sites; branch weights undefined"
        )
    c_vec = evecs[:, 1]
    weights = []
    for s in (1, -1):
        phi = spectral.eigenspinor(k0, coin, s).components
        weights.append(float(np.abs(np.vdot(phi, c_vec)) ** 2))
    return weights[0], weights[1]
