"""Naive dictionary-based reference dynamics, independent of the package
implementation.  Used as the oracle for the vectorized kernels."""

import math


def ref_step(amps, theta):
    """One map application on a dict {x: (r, l)}."""
    c, s = math.cos(theta), math.sin(theta)
    xs = amps.keys()
    out = {}
    for x in range(min(xs) - 1, max(xs) + 2):
        r_in = amps.get(x + 1, (0j, 0j))
        l_in = amps.get(x - 1, (0j, 0j))
        out[x] = (c * r_in[0] + s * r_in[1], s * l_in[0] - c * l_in[1])
    return out


def ref_evolve(amps, theta, steps):
    for _ in range(steps):
        amps = ref_step(amps, theta)
    return amps


def from_state(state):
    return {
        int(x): (complex(r), complex(l))
        for x, r, l in zip(state.positions, state.R, state.L)
    }
