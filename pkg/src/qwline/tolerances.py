"""Central numeric tolerances and resource limits.

Every module reads its thresholds from here so that precision policy is
set in exactly one place.  All arithmetic is double precision.
"""

# State / distribution normalization after construction.
NORM_ATOL = 1e-12

# Per-step norm drift allowed for the lattice map (it is unitary; drift is
# pure floating-point noise).
UNITARITY_ATOL = 1e-13

# Map iteration vs transform-based propagation, per amplitude.
ENGINE_MATCH_ATOL = 1e-10

# Parseval identity for ring decompositions.
PARSEVAL_RTOL = 1e-10

# Continuum envelope normalization (sum h*|F|^2).
ENVELOPE_NORM_ATOL = 1e-10

# Envelope edge occupancy above this aborts a non-periodic propagation.
EDGE_LEAK_ATOL = 1e-8

# Envelope tails below this magnitude are truncated when building lattice
# states.
SUPPORT_CUTOFF = 1e-12

# Occupation below this counts as an exact parity zero (double noise floor).
PARITY_ATOL = 1e-14

# Relative size of the second Gram eigenvalue above which a state's coin
# part is considered site-dependent.
COIN_RANK_RTOL = 1e-10

# Hard cap on the dense window, in sites; evolve() refuses to grow past it.
MAX_WINDOW_SITES = 4_194_304
