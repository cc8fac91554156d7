"""Coined quantum walk on the line.

Exact lattice dynamics (``walk``), plane-wave spectral machinery and an
FFT propagator (``spectral``), slow-envelope continuum solvers and
closed-form predictions (``envelope``), extended initial conditions
(``initial``), distribution analysis (``analysis``), and a config-driven
CLI (``cli``).  The hot map kernel is a compiled extension with a
pure-numpy fallback; see ``qwline.kernels``.
"""

__version__ = "0.1.0"

from .analysis import (
    FlatnessReport,
    Moments,
    PacketTrack,
    distance,
    flatness,
    moments,
    parity_zeros,
    track_packets,
)
from .envelope import (
    EnvelopeField,
    FlatTopPrediction,
    SincSpectrumReport,
    flat_top_prediction,
    gaussian_envelope_analytic,
    propagate_envelope,
    sinc_spectrum_check,
    talbot_period,
    width_law,
)
from .initial import (
    CoinChoice,
    EnvelopeSpec,
    InitialConditionSpec,
    branch_weights,
    build,
    fig2c_specs,
)
from .spectral import (
    Eigenspinor,
    SpectralDecomposition,
    branch_omega,
    decompose,
    eigenspinor,
    exact_evolve,
    omega,
    omega_derivative,
    plane_wave_step,
)
from .walk import (
    CoinParameter,
    ProbabilityDistribution,
    WalkerState,
    evolve,
    probability,
    step,
)

__all__ = [
    "CoinChoice",
    "CoinParameter",
    "Eigenspinor",
    "EnvelopeField",
    "EnvelopeSpec",
    "FlatnessReport",
    "FlatTopPrediction",
    "InitialConditionSpec",
    "Moments",
    "PacketTrack",
    "ProbabilityDistribution",
    "SincSpectrumReport",
    "SpectralDecomposition",
    "WalkerState",
    "branch_omega",
    "branch_weights",
    "build",
    "decompose",
    "distance",
    "eigenspinor",
    "evolve",
    "exact_evolve",
    "fig2c_specs",
    "flat_top_prediction",
    "flatness",
    "gaussian_envelope_analytic",
    "moments",
    "omega",
    "omega_derivative",
    "parity_zeros",
    "plane_wave_step",
    "probability",
    "propagate_envelope",
    "sinc_spectrum_check",
    "step",
    "talbot_period",
    "track_packets",
    "width_law",
]
